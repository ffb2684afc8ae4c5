#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "extord/errors.hpp"

namespace extord {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 kDefaultSieveCeiling = 100'000'000;

struct PrimeFactor {
  u64 p;
  u32 nu;
  friend bool operator==(const PrimeFactor&, const PrimeFactor&) = default;
};

// Canonical factorization: prime factors in strictly increasing order, exponents >= 1.
// The empty factor list represents 1.
class Factored {
 public:
  Factored() = default;
  static Factored one() { return Factored(); }
  // Validates ordering, exponents, and primality of each part.
  static Factored from_factors(std::vector<PrimeFactor> fs);

  const std::vector<PrimeFactor>& factors() const { return fs_; }
  bool is_one() const { return fs_.empty(); }
  std::size_t distinct_primes() const { return fs_.size(); }
  u32 exponent_of(u64 p) const;
  double log_value() const;
  u64 value_u64() const;  // throws ContractError if the value exceeds 2^64 - 1
  std::string to_string() const;

  Factored times_coprime(const Factored& other) const;
  Factored quotient(const Factored& d) const;  // requires d | this, exponentwise

  friend bool operator==(const Factored&, const Factored&) = default;

 private:
  std::vector<PrimeFactor> fs_;
};

// Ascending primes <= limit via a segmented sieve. Guarded by a ceiling so a typo
// cannot silently eat gigabytes.
class PrimeTable {
 public:
  explicit PrimeTable(u64 limit, u64 ceiling = kDefaultSieveCeiling);
  u64 limit() const { return limit_; }
  const std::vector<u64>& primes() const { return primes_; }
  std::size_t count() const { return primes_.size(); }

 private:
  u64 limit_;
  std::vector<u64> primes_;
};

PrimeTable primes_up_to(u64 x, u64 ceiling = kDefaultSieveCeiling);

bool is_prime(u64 n);         // deterministic Miller-Rabin, full 64-bit range
Factored factorize(u64 n);    // n >= 1; trial division + Brent rho for large cofactors
int mobius(u32 n);            // n >= 1

// prod_{p <= x} (1 - 1/p)^{-1}, accumulated in log space over ascending primes.
double log_mertens_product(const PrimeTable& table, u64 x);
double mertens_product(u64 x);
double mertens_product(const PrimeTable& table, u64 x);

}  // namespace extord
