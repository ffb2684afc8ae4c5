#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "extord/primes.hpp"

namespace extord {

// Closed-form knowledge about inf_nu phi(p^nu)/p^nu for a system, when available.
// Either function may decline (nullopt) for particular primes; p=2 on pathological
// systems is the motivating case.
struct PhiInfHint {
  std::function<std::optional<double>(u64 p)> value;
  std::function<std::optional<u32>(u64 p)> attained_at;
};

// A multiplicative system of divisor sets, defined prime-locally by the rule
// AE_p(nu) giving the admissible exponents of p inside divisors of p^nu.
struct DivisorSystem {
  std::string name;
  bool claims_multiplicative = true;
  // Must return a sorted subset of {0..nu} with AE_p(0) = {0}.
  std::function<std::vector<u32>(u64 p, u32 nu)> admissible;
  // Optional composite-level divisor-set override, consulted only by
  // check_multiplicative. Lets tests model a rule whose behavior at composite
  // arguments contradicts its prime-local claim.
  std::function<std::vector<u64>(u64 n)> composite_override;
  std::optional<PhiInfHint> phi_inf_hint;
};

// Validated accessor: enforces ordering, range, and the AE_p(0) = {0}
// normalization; throws MalformedSystemError on violation.
std::vector<u32> admissible_checked(const DivisorSystem& sys, u64 p, u32 nu);

enum class BuiltinSystem { Standard, Unitary, Exponential };

DivisorSystem builtin_system(BuiltinSystem kind);
DivisorSystem builtin_system(const std::string& name);

// Standard at odd primes; at p=2, AE_2(nu) = {0..nu} for nu in the given set
// and {nu} otherwise. With sparse exponent sets, 2^nu/phi(2^nu) is unbounded.
DivisorSystem pathological_two_power_system(std::vector<u32> exponent_set);

// The divisor set A(n) as the product over prime components of {p^delta},
// enumerated in lexicographic exponent order (first prime slowest).
std::vector<Factored> a_divisors(const DivisorSystem& sys, const Factored& n);

struct SystemWitness {
  bool consistent = true;
  // Set when consistent is false: coprime pair whose divisor sets disagree,
  // plus one divisor value present on exactly one side.
  u64 n1 = 0;
  u64 n2 = 0;
  u64 offending_divisor = 0;
  std::string detail;
};

// Verifies A(n1*n2) = A(n1)*A(n2) (elementwise product) for all coprime
// factorizations of every n <= bound, computing the left side by direct
// enumeration of all divisors filtered per prime. bound <= 10^4.
SystemWitness check_multiplicative(const DivisorSystem& sys, u64 bound);

}  // namespace extord
