#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "extord/extremal.hpp"

namespace extord {

struct ChampionPoint {
  u64 x = 0;          // prime bound used
  double log_n = 0;   // sum of exponent * log p; n itself is never materialized
  double log_f = 0;   // log f(n)
  double ratio = 0;   // exp(log_f) / log(log_n)
};

// Exponent choices split at P: k_p for p <= P (head), e_p for p > P (tail).
struct ExponentSchedule {
  u64 P = 0;
  std::function<u32(u64 p)> exponent;
};

// Head: smallest argmax of f(p^nu) over nu <= floor(log x / log p).
// Tail: the hint's attained exponent when one exists (a constant exponent
// trivially satisfies the p^{o(1)} side condition), else the capped argmax.
ExponentSchedule default_schedule(const MultFn& f, u64 x, u64 P);

// Default head/tail split point (fixed at 100: small enough that heads can
// reach exponent 2 on grids starting at 10^4, large enough that the tail
// deficit sum_{p>P} p^{-2} clears eps >= ~3e-3).
u64 default_head_bound(const MultFn& f, double eps);

struct ChampionResult {
  ChampionPoint point;
  u64 P = 0;
  double head_margin = 1.0;  // prod_{p<=P} f(p^{k_p}) / prod_{p<=P} rho(p)
  double tail_margin = 1.0;  // prod_{P<p<=x} f(p^{e_p}) / rho(p)
  bool rho_all_exact = true;
};

// Builds n(x) = prod_{p<=P} p^{k_p} * prod_{P<p<=x} p^{e_p} in log space and
// verifies the two product inequalities at the given eps, naming the failing
// prime on violation.
ChampionResult build_champion(const MultFn& f, u64 x, u64 P, double eps,
                              const ExponentSchedule& schedule,
                              const PrimeTable* table = nullptr);

struct ChampionSeries {
  std::vector<ChampionPoint> points;
  std::optional<double> target;  // e^gamma * R midpoint when R is certified
  std::vector<double> deviations;
};

// Default eps respects the finite-x deficit floor ~ sum_{p>sqrt(x)} p^{-2}
// (~2e-3 at x = 10^4), which no schedule capped at exponent log x/log p can
// undercut at the small end of the default grid.
ChampionSeries champion_series(const MultFn& f, const std::vector<u64>& x_grid,
                               double eps = 1e-2);

// n(x) = prod_{p<=x} p^{e_p} with e_p the inf-attaining exponent of
// phi(p^nu)/p^nu; reports phi(n) * log log n / n as the ratio.
// Primes in exclude are left out (restricted champions).
ChampionPoint build_phi_champion(const DivisorSystem& sys, u64 x,
                                 const PrimeTable* table = nullptr,
                                 const PrimeSetFilter* exclude = nullptr);

struct ScanRecord {
  u64 n = 0;
  double ratio = 0;
};

// Running maxima of eval(f, n) / log log n over 16 <= n <= n_max, factoring
// every n blockwise. Records are strictly increasing in ratio.
std::vector<ScanRecord> empirical_scan(const MultFn& f, u64 n_max);

struct ScheduleEntry {
  u32 j = 0;
  u64 p = 0;
  u64 nu = 0;            // 0 when the exponent cannot be materialized
  double log_nu = 0;     // always meaningful
  double log_log_q = 0;  // log(nu * log p); log_q itself may exceed double range
  double log_q = 0;      // +infinity when not representable
  bool sieve_certified = false;  // crossing located by sieve vs growth envelope
  double g_log_lower = 0;        // certified lower bound for log g(log q_j)
};

struct CounterexampleFn {
  PrimeSetFilter S;
  std::vector<ScheduleEntry> schedule;
  MultFn fn;  // f(q_j) = j on materialized blocks, 1 + 1/p elsewhere
};

struct CounterexampleOptions {
  u64 nu_ceiling = 1'000'000;
  u64 g_sieve_limit = 20'000'000;
  u64 sieve_ceiling = kDefaultSieveCeiling;
};

// Chooses q_j = p_j^{nu_j} (p_j round-robin over S-primes <= bound) with the
// minimal nu_j making g(log q_j) >= j^j under certified evaluation of g:
// sieved prefix products where the crossing is within reach, the filter's
// growth envelope beyond. Without an envelope, out-of-reach targets raise a
// resource error advising a larger bound.
CounterexampleFn build_counterexample(const PrimeSetFilter& S, u32 j_max, u64 bound,
                                      const CounterexampleOptions& opts = {});

// Recomputes the certified lower bound of log g(log q_j) - j log j for every
// entry; returns the worst margin (>= 0 when the schedule is valid).
double verify_counterexample_schedule(const CounterexampleFn& cf);

struct ProbeReportEntry {
  double log_n = 0;
  double log_f = 0;
  double ratio = 0;
  u32 k = 0;        // max j whose block exactly divides the probe
  double f_n1 = 0;  // product of matched scheduled values
  double k_factorial = 1;
  bool factorial_bound_ok = true;
};

struct ProbeReport {
  std::vector<ProbeReportEntry> entries;
  std::vector<double> running_max;
};

ProbeReport counterexample_scan(const CounterexampleFn& cf,
                                const std::vector<Factored>& probes);

// A probe of height ~ target_log_n: up to max_blocks materialized scheduled
// blocks plus a squarefree filler of primes outside S.
Factored make_probe(const CounterexampleFn& cf, const PrimeTable& table,
                    double target_log_n, u32 max_blocks);

struct Witness {
  Factored n;
  double log_n = 0;
  double log_f = 0;
  double ratio = 0;  // exp can overflow to +inf for extreme schedules; log_f is authoritative
  u64 x_used = 0;
  u32 nu_used = 0;
};

// Unboundedness witness for thin S: n = s^{nu} * (restricted phi champion
// over primes outside S up to x), driving f = n/phi. Walks nu upward along
// the system's schedule and x along a geometric grid until the combined
// ratio reaches target.
Witness unbounded_witness(const DivisorSystem& sys, const PrimeSetFilter& S, double target,
                          u64 x_max, const PrimeTable* table = nullptr,
                          u32 nu_cap = 1u << 14);

}  // namespace extord
