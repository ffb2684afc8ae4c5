#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "extord/divisor_system.hpp"

namespace extord {

// Closed-form knowledge of rho(p) = sup_nu f(p^nu). value may return +infinity;
// attained_at names an exponent realizing the sup when one exists.
struct RhoHint {
  std::function<double(u64 p)> value;
  std::function<std::optional<u32>(u64 p)> attained_at;
};

// Declares |(1 - 1/p) * rho(p) - 1| <= C / p^2 for p > p0.
// C = 0 states the local factor equals 1 exactly beyond p0.
struct TailEnvelope {
  double C = 0.0;
  u64 p0 = 2;
};

// A nonnegative multiplicative function given by its prime-power rule.
struct MultFn {
  std::string name;
  std::function<double(u64 p, u32 nu)> value_at;      // f(p^nu); value_at(p, 0) = 1
  std::function<double(u64 p, u32 nu)> log_value_at;  // optional; log(value_at) if unset
  std::optional<RhoHint> rho_hint;
  std::optional<TailEnvelope> tail_envelope;
  // Values are finite sums of distinct powers sum_i eps_i p^{-i}; required by
  // the alternating-exponent extraction.
  bool sigma_form = false;
  // Scan-exactness certificate: f(p^nu) is non-increasing for nu >= this bound.
  std::optional<u32> monotone_beyond;

  double log_at(u64 p, u32 nu) const;
};

double eval(const MultFn& f, const Factored& n);
double eval_log(const MultFn& f, const Factored& n);

double log_mpz(const mpz_class& z);  // natural log of a positive exact integer

// sigma over the divisor set: exact product over primes of sum_{delta in AE} p^delta.
mpz_class sigma_a(const DivisorSystem& sys, const Factored& n);

// Memoizing per-prime table of phi values. Entries are exact; the recursion
// sum_{delta in AE_p(nu)} phi(p^delta) = p^nu pins them uniquely.
// Not synchronized: confine one table to one worker.
class PhiTable {
 public:
  explicit PhiTable(const DivisorSystem& sys) : sys_(&sys) {}
  const mpz_class& value(u64 p, u32 nu);  // extends on demand; may throw UnsolvableError
  const DivisorSystem& system() const { return *sys_; }

 private:
  void extend(u64 p, u32 nu_max);
  const DivisorSystem* sys_;
  std::map<u64, std::vector<mpz_class>> by_prime_;
};

// Solves the recursion for 0 <= nu <= nu_max at the given prime, verifying
// solvability (nu in AE_p(nu)) eagerly and reporting the first offending nu.
PhiTable solve_phi(const DivisorSystem& sys, u64 p, u32 nu_max);

// Moebius-sum closed form for the exponential system: sum_{kappa | nu} mu(nu/kappa) p^kappa.
mpz_class phi_exponential_closed_form(u64 p, u32 nu);

mpz_class phi_a(const DivisorSystem& sys, const Factored& n, PhiTable& cache);

struct PhiBoundsReport {
  u64 p = 0;
  u32 nu_max = 0;
  bool pass = false;
  // Smallest slack of (p-1)/(p-2) - p^nu/phi(p^nu) over nu <= nu_max; must stay > 0.
  double worst_upper_margin = 0.0;
  std::optional<u32> e_p;  // smallest e >= 1 with e-1 admissible in AE_p(e)
  // f(p^e) * ((p-1)/(p-2))^{-1} - p(p-2)/(p^2-2p+2); a sound lower-bound check
  // since rho(p) <= (p-1)/(p-2). Absent when no e_p exists within nu_max.
  std::optional<double> lower_margin;
};

// Audits the two prime-local inequalities for f = n/phi at an odd prime.
PhiBoundsReport phi_bounds_check(const DivisorSystem& sys, u64 p, u32 nu_max);

// sum_{d in A(n)} f(d) * g(n/d).
double convolve_at(const DivisorSystem& sys, const MultFn& f, const MultFn& g,
                   const Factored& n);

// f(n) = sigma_A(n)/n as a prime-power rule, with certification metadata for
// the builtin systems.
MultFn sigma_over_id_fn(const DivisorSystem& sys);

// f(n) = n/phi_A(n) as a prime-power rule. Values solve the phi recursion
// transiently per call (no shared state).
MultFn id_over_phi_fn(const DivisorSystem& sys);

}  // namespace extord
