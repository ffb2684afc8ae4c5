#include "extord/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace extord {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kE = 2.718281828459045235;

u32 capped_argmax(const MultFn& f, u64 p, u32 cap) {
  u32 best = 0;
  double bv = 1.0;
  for (u32 nu = 1; nu <= cap; ++nu) {
    double v = f.value_at(p, nu);
    if (v > bv) {
      bv = v;
      best = nu;
    }
  }
  return best;
}

}  // namespace

ExponentSchedule default_schedule(const MultFn& f, u64 x, u64 P) {
  ExponentSchedule s;
  s.P = P;
  const double lx = std::log(static_cast<double>(x));
  s.exponent = [f, P, lx](u64 p) -> u32 {
    const double lp = std::log(static_cast<double>(p));
    const u32 cap = static_cast<u32>(std::floor(lx / lp + 1e-9));
    if (p <= P) return capped_argmax(f, p, cap);
    if (f.rho_hint) {
      if (auto at = f.rho_hint->attained_at(p)) return *at;
    }
    return capped_argmax(f, p, cap);
  };
  return s;
}

u64 default_head_bound(const MultFn&, double eps) {
  if (eps <= 0.0 || eps >= 1.0) throw ContractError("eps must lie in (0,1)");
  // Fixed split. Two pressures meet here: the tail needs P large enough that
  // sum_{p>P} p^{-2} stays under eps, while heads must keep P <= sqrt(x) so
  // capped argmaxes can reach exponent 2 (the sup of the exponential-divisor
  // sigma lives there). P = 100 serves every grid starting at x >= 10^4 down
  // to eps ~ 3e-3; the builder re-verifies both inequalities regardless and
  // names the failing prime, so a bad pairing cannot pass silently.
  return 100;
}

ChampionResult build_champion(const MultFn& f, u64 x, u64 P, double eps,
                              const ExponentSchedule& schedule, const PrimeTable* table) {
  if (P >= x) throw ContractError("need P < x");
  if (eps <= 0.0 || eps >= 1.0) throw ContractError("eps must lie in (0,1)");
  std::optional<PrimeTable> own;
  if (table == nullptr || table->limit() < x) {
    own.emplace(x);
    table = &*own;
  }
  double log_n = 0.0, log_f = 0.0;
  double head_lhs = 0.0, head_rhs = 0.0;
  double tail_log = 0.0;
  double worst_head_term = kInf;
  u64 worst_head_p = 0;
  bool all_exact = true;
  const double lim = std::log1p(-eps);
  for (u64 p : table->primes()) {
    if (p > x) break;
    RhoEstimate est = rho(f, p);
    if (!std::isfinite(est.value)) throw InfiniteLocalFactorError(p);
    if (est.status != RhoStatus::Exact) all_exact = false;
    const double lrho = std::log(est.value);
    const u32 e = schedule.exponent(p);
    double lf = 0.0;
    if (e > 0) {
      lf = f.log_at(p, e);
      log_n += e * std::log(static_cast<double>(p));
      log_f += lf;
    }
    if (p <= P) {
      head_lhs += lf;
      head_rhs += lrho;
      if (lf - lrho < worst_head_term) {
        worst_head_term = lf - lrho;
        worst_head_p = p;
      }
    } else {
      tail_log += lf - lrho;
      if (tail_log < lim - 1e-12)
        throw HypothesisError(p, "tail product prod f(p^{e_p})/rho(p) fell below 1-eps");
    }
  }
  if (head_lhs - head_rhs < lim - 1e-12)
    throw HypothesisError(worst_head_p,
                          "head product prod f(p^{k_p}) fell below (1-eps) prod rho(p)");
  if (!(log_n > kE))
    throw ContractError("log n(x) <= e; log log n is not in usable territory");

  ChampionResult res;
  res.P = P;
  res.rho_all_exact = all_exact;
  res.head_margin = std::exp(head_lhs - head_rhs);
  res.tail_margin = std::exp(tail_log);
  res.point = ChampionPoint{x, log_n, log_f, std::exp(log_f) / std::log(log_n)};
  return res;
}

ChampionSeries champion_series(const MultFn& f, const std::vector<u64>& x_grid, double eps) {
  if (x_grid.empty()) throw ContractError("empty x grid");
  for (std::size_t i = 1; i < x_grid.size(); ++i)
    if (x_grid[i - 1] >= x_grid[i]) throw ContractError("x grid must be strictly increasing");
  const u64 x_max = x_grid.back();
  PrimeTable table(x_max);
  const u64 P = std::max<u64>(2, std::min(default_head_bound(f, eps), x_grid.front() - 1));

  ChampionSeries series;
  ProductEstimate r = r_product(f, std::min<u64>(x_max, 1'000'000), nullptr, &table);
  if (r.certified) series.target = kExpGamma * 0.5 * (r.lower + r.upper);
  for (u64 x : x_grid) {
    auto sched = default_schedule(f, x, P);
    auto res = build_champion(f, x, P, eps, sched, &table);
    series.points.push_back(res.point);
    if (series.target)
      series.deviations.push_back(std::abs(res.point.ratio - *series.target));
  }
  return series;
}

ChampionPoint build_phi_champion(const DivisorSystem& sys, u64 x, const PrimeTable* table,
                                 const PrimeSetFilter* exclude) {
  if (!sys.phi_inf_hint || !sys.phi_inf_hint->attained_at)
    throw ContractError("system carries no inf-attaining exponent hint");
  std::optional<PrimeTable> own;
  if (table == nullptr || table->limit() < x) {
    own.emplace(x);
    table = &*own;
  }
  double log_n = 0.0, log_phi = 0.0;
  for (u64 p : table->primes()) {
    if (p > x) break;
    if (exclude && exclude->contains(p)) continue;
    auto e = sys.phi_inf_hint->attained_at(p);
    if (!e)
      throw ContractError("no inf-attaining exponent at p=" + std::to_string(p) +
                          "; exclude it via a filter");
    PhiTable t(sys);
    log_phi += log_mpz(t.value(p, *e));
    log_n += *e * std::log(static_cast<double>(p));
  }
  if (!(log_n > kE))
    throw ContractError("log n(x) <= e; raise x (x below 3 is always rejected)");
  ChampionPoint pt;
  pt.x = x;
  pt.log_n = log_n;
  pt.log_f = log_phi - log_n;  // log of phi(n)/n
  pt.ratio = std::exp(pt.log_f) * std::log(log_n);
  return pt;
}

std::vector<ScanRecord> empirical_scan(const MultFn& f, u64 n_max) {
  if (n_max < 16 || n_max > 10'000'000)
    throw ContractError("scan range is 16 <= n_max <= 10^7");
  const u64 root = static_cast<u64>(std::sqrt(static_cast<double>(n_max))) + 1;
  PrimeTable small(root);
  std::vector<ScanRecord> records;
  double best = 0.0;
  constexpr u64 kBlock = 1u << 16;
  std::vector<u64> rem(kBlock);
  std::vector<double> val(kBlock);
  for (u64 lo = 16; lo <= n_max; lo += kBlock) {
    const u64 hi = std::min(n_max, lo + kBlock - 1);
    const u64 len = hi - lo + 1;
    for (u64 i = 0; i < len; ++i) {
      rem[i] = lo + i;
      val[i] = 1.0;
    }
    for (u64 p : small.primes()) {
      if (p * p > hi) break;
      for (u64 m = (lo + p - 1) / p * p; m <= hi; m += p) {
        u64 i = m - lo;
        if (rem[i] % p != 0) continue;  // the factor was already peeled below
        u32 nu = 0;
        while (rem[i] % p == 0) {
          rem[i] /= p;
          ++nu;
        }
        val[i] *= f.value_at(p, nu);
      }
    }
    for (u64 i = 0; i < len; ++i) {
      double v = val[i];
      if (rem[i] > 1) v *= f.value_at(rem[i], 1);
      const double ratio = v / std::log(std::log(static_cast<double>(lo + i)));
      if (ratio > best) {
        best = ratio;
        records.push_back({lo + i, ratio});
      }
    }
  }
  return records;
}

namespace {

double factorial(u32 k) {
  double r = 1.0;
  for (u32 i = 2; i <= k; ++i) r *= i;
  return r;
}

}  // namespace

CounterexampleFn build_counterexample(const PrimeSetFilter& S, u32 j_max, u64 bound,
                                      const CounterexampleOptions& opts) {
  if (S.declared_thin)
    throw ContractError("counterexamples exist for fat prime sets only (declared_thin must be false)");
  if (j_max < 1) throw ContractError("j_max must be >= 1");
  PrimeTable enum_table(bound, opts.sieve_ceiling);
  std::vector<u64> s_primes;
  for (u64 p : enum_table.primes())
    if (S.contains(p)) s_primes.push_back(p);
  if (s_primes.empty())
    throw ContractError("no primes of S found within bound " + std::to_string(bound));

  // Prefix log-products of g over sieved S-primes: crossing_Y[j] is the least
  // real Y with g(Y) >= j^j, when that crossing lies within the sieve limit.
  PrimeTable g_table(opts.g_sieve_limit, opts.sieve_ceiling);
  std::vector<double> cross_y(j_max + 1, -1.0), cross_acc(j_max + 1, 0.0);
  {
    double acc = 0.0;
    u32 j = 1;
    while (j <= j_max && j * std::log(static_cast<double>(j)) <= 0.0) {
      cross_y[j] = 0.0;  // j = 1: g >= 1 everywhere
      cross_acc[j] = 0.0;
      ++j;
    }
    for (u64 p : g_table.primes()) {
      if (j > j_max) break;
      if (!S.contains(p)) continue;
      acc += std::log1p(1.0 / static_cast<double>(p));
      while (j <= j_max && acc >= j * std::log(static_cast<double>(j))) {
        cross_y[j] = static_cast<double>(p);
        cross_acc[j] = acc;
        ++j;
      }
    }
  }

  CounterexampleFn cf;
  cf.S = S;
  double prev_log_log_q = -kInf;
  for (u32 j = 1; j <= j_max; ++j) {
    const u64 p = s_primes[(j - 1) % s_primes.size()];
    const double lp = std::log(static_cast<double>(p));
    ScheduleEntry e;
    e.j = j;
    e.p = p;
    if (cross_y[j] >= 0.0) {
      u64 nu = std::max<u64>(1, static_cast<u64>(std::ceil(cross_y[j] / lp - 1e-12)));
      // Keep q_j strictly increasing.
      while (std::log(static_cast<double>(nu) * lp) <= prev_log_log_q + 1e-15) ++nu;
      if (nu > opts.nu_ceiling && !S.growth)
        throw ResourceLimitError("nu_" + std::to_string(j) + " = " + std::to_string(nu) +
                                 " exceeds the ceiling " + std::to_string(opts.nu_ceiling) +
                                 "; raise the ceiling or supply a filter growth envelope");
      e.sieve_certified = true;
      e.nu = nu;
      e.log_nu = std::log(static_cast<double>(nu));
      e.log_q = static_cast<double>(nu) * lp;
      e.log_log_q = std::log(e.log_q);
      e.g_log_lower = cross_acc[j];
    } else if (S.growth) {
      const auto& g = *S.growth;
      if (g.density <= 0.0)
        throw ContractError("growth envelope must have positive density");
      const double lnT = j * std::log(static_cast<double>(j));
      // With Y = log q: log g(Y) >= density * log log Y + c_lo, so the target
      // log g(log q) >= j log j is met once
      //   log log (log q) >= (lnT - c_lo) / density.
      const double lnln_logq = (lnT - g.c_lo) / g.density;
      double llq = std::exp(lnln_logq);  // = log log q
      llq = std::max(llq, std::log(std::max(g.valid_from, kE)));  // keep log q in validity range
      e.sieve_certified = false;
      e.log_log_q = std::max(llq, prev_log_log_q + 1e-9);
      e.log_q = std::exp(e.log_log_q);  // overflows to +inf for deep j; log_log_q is authoritative
      e.log_nu = e.log_log_q - std::log(lp);
      e.nu = (e.log_nu < 62.0 * std::log(2.0))
                 ? static_cast<u64>(std::ceil(std::exp(e.log_nu)))
                 : 0;
      e.g_log_lower = g.density * std::log(e.log_log_q) + g.c_lo;
    } else {
      throw ResourceLimitError(
          "g(log q) >= " + std::to_string(j) + "^" + std::to_string(j) +
          " is unreachable within the g sieve limit " + std::to_string(opts.g_sieve_limit) +
          " and the filter has no growth envelope; raise the limit or choose a filter with one");
    }
    prev_log_log_q = e.log_log_q;
    cf.schedule.push_back(e);
  }

  // Assemble the function: exact scheduled blocks map to j, everything else to 1 + 1/p.
  std::map<std::pair<u64, u64>, u32> blocks;
  for (const auto& e : cf.schedule)
    if (e.nu > 0) blocks[{e.p, e.nu}] = e.j;
  cf.fn.name = "counterexample[" + S.name + "]";
  cf.fn.value_at = [blocks](u64 p, u32 nu) -> double {
    if (nu == 0) return 1.0;
    auto it = blocks.find({p, static_cast<u64>(nu)});
    if (it != blocks.end()) return static_cast<double>(it->second);
    return 1.0 + 1.0 / static_cast<double>(p);
  };
  std::vector<u64> scheduled_primes;
  for (const auto& e : cf.schedule) scheduled_primes.push_back(e.p);
  std::sort(scheduled_primes.begin(), scheduled_primes.end());
  scheduled_primes.erase(std::unique(scheduled_primes.begin(), scheduled_primes.end()),
                         scheduled_primes.end());
  cf.fn.rho_hint = RhoHint{
      [scheduled_primes](u64 p) {
        return std::binary_search(scheduled_primes.begin(), scheduled_primes.end(), p)
                   ? kInf
                   : 1.0 + 1.0 / static_cast<double>(p);
      },
      [scheduled_primes](u64 p) -> std::optional<u32> {
        if (std::binary_search(scheduled_primes.begin(), scheduled_primes.end(), p))
          return std::nullopt;
        return 1u;
      }};
  return cf;
}

double verify_counterexample_schedule(const CounterexampleFn& cf) {
  double worst = kInf;
  std::optional<PrimeTable> sieve;
  for (const auto& e : cf.schedule) {
    const double lnT = e.j * std::log(static_cast<double>(e.j));
    double lower;
    if (e.sieve_certified) {
      // Recompute the sieved prefix product up to log q_j from scratch.
      const u64 limit = static_cast<u64>(std::ceil(e.log_q)) + 1;
      if (!sieve || sieve->limit() < limit) sieve.emplace(limit);
      double acc = 0.0;
      for (u64 p : sieve->primes()) {
        if (static_cast<double>(p) > e.log_q) break;
        if (cf.S.contains(p)) acc += std::log1p(1.0 / static_cast<double>(p));
      }
      lower = acc;
    } else {
      const auto& g = *cf.S.growth;
      if (e.log_log_q < std::log(g.valid_from)) return -kInf;  // log q below envelope validity
      lower = g.density * std::log(e.log_log_q) + g.c_lo;
    }
    worst = std::min(worst, lower - lnT);
  }
  return worst;
}

ProbeReport counterexample_scan(const CounterexampleFn& cf,
                                const std::vector<Factored>& probes) {
  ProbeReport rep;
  double best = -kInf;
  for (const Factored& n : probes) {
    ProbeReportEntry e;
    e.log_n = n.log_value();
    if (!(e.log_n > kE))
      throw ContractError("probe too small: log n must exceed e");
    e.log_f = eval_log(cf.fn, n);
    e.ratio = std::exp(e.log_f) / std::log(e.log_n);
    double lf1 = 0.0;
    for (const auto& pf : n.factors()) {
      for (const auto& s : cf.schedule) {
        if (s.nu > 0 && s.p == pf.p && s.nu == pf.nu) {
          e.k = std::max(e.k, s.j);
          lf1 += std::log(static_cast<double>(s.j));
        }
      }
    }
    e.f_n1 = std::exp(lf1);
    e.k_factorial = factorial(e.k);
    e.factorial_bound_ok = e.f_n1 <= e.k_factorial * (1.0 + 1e-9);
    best = std::max(best, e.ratio);
    rep.entries.push_back(e);
    rep.running_max.push_back(best);
  }
  return rep;
}

Factored make_probe(const CounterexampleFn& cf, const PrimeTable& table,
                    double target_log_n, u32 max_blocks) {
  if (target_log_n <= 3.0) throw ContractError("probe height must exceed 3");
  std::vector<PrimeFactor> parts;
  std::vector<u64> used;
  double budget = target_log_n;
  u32 blocks = 0;
  for (const auto& e : cf.schedule) {
    if (blocks >= max_blocks) break;
    if (e.nu == 0 || e.nu > 0xFFFFFFFFull) continue;
    if (e.log_q > target_log_n / 2.0) continue;
    if (std::find(used.begin(), used.end(), e.p) != used.end()) continue;
    parts.push_back({e.p, static_cast<u32>(e.nu)});
    used.push_back(e.p);
    budget -= e.log_q;
    ++blocks;
  }
  for (u64 p : table.primes()) {
    const double lp = std::log(static_cast<double>(p));
    if (lp > budget) break;
    if (cf.S.contains(p)) continue;
    parts.push_back({p, 1});
    budget -= lp;
  }
  std::sort(parts.begin(), parts.end(),
            [](const PrimeFactor& a, const PrimeFactor& b) { return a.p < b.p; });
  return Factored::from_factors(std::move(parts));
}

Witness unbounded_witness(const DivisorSystem& sys, const PrimeSetFilter& S, double target,
                          u64 x_max, const PrimeTable* table, u32 nu_cap) {
  if (!S.declared_thin)
    throw ContractError("unbounded witnesses require a thin S (declared_thin = true)");
  if (!(target > 0.0)) throw ContractError("target must be positive");
  std::optional<PrimeTable> own;
  if (table == nullptr || table->limit() < x_max) {
    own.emplace(x_max);
    table = &*own;
  }
  u64 s_prime = 0;
  for (u64 p : table->primes()) {
    if (S.contains(p)) {
      s_prime = p;
      break;
    }
  }
  if (s_prime == 0) throw ContractError("S contains no prime within x_max");

  const double log_target = std::log(target);
  const double lsp = std::log(static_cast<double>(s_prime));
  PhiTable cache(sys);

  std::vector<u64> x_grid;
  for (u64 x = std::min<u64>(x_max, 10'000);; x *= 10) {
    x_grid.push_back(std::min(x, x_max));
    if (x >= x_max) break;
  }

  double best_ratio_log = -kInf;
  for (u64 x : x_grid) {
    ChampionPoint c2 = build_phi_champion(sys, x, table, &S);
    const double log_f2 = c2.log_n - (c2.log_f + c2.log_n);  // log(n2/phi(n2))
    // Walk nu upward at the S-prime, tracking the best f(s^nu) = s^nu/phi(s^nu).
    double best_lf1 = 0.0;
    u32 best_nu = 0;
    for (u32 nu = 1; nu <= nu_cap; ++nu) {
      double lf1 = nu * lsp - log_mpz(cache.value(s_prime, nu));
      if (lf1 > best_lf1) {
        best_lf1 = lf1;
        best_nu = nu;
      }
      const double log_n = best_nu * lsp + c2.log_n;
      const double lr = best_lf1 + log_f2 - std::log(std::log(log_n));
      best_ratio_log = std::max(best_ratio_log, lr);
      if (lr >= log_target) {
        Witness w;
        std::vector<PrimeFactor> parts;
        if (best_nu > 0) parts.push_back({s_prime, best_nu});
        for (u64 p : table->primes()) {
          if (p > x) break;
          if (S.contains(p)) continue;
          parts.push_back({p, *sys.phi_inf_hint->attained_at(p)});
        }
        std::sort(parts.begin(), parts.end(),
                  [](const PrimeFactor& a, const PrimeFactor& b) { return a.p < b.p; });
        w.n = Factored::from_factors(std::move(parts));
        w.log_n = log_n;
        w.log_f = best_lf1 + log_f2;
        w.ratio = std::exp(std::min(w.log_f, 700.0)) / std::log(log_n);
        w.x_used = x;
        w.nu_used = best_nu;
        return w;
      }
    }
  }
  throw ResourceLimitError(
      "target " + std::to_string(target) + " not reached within x <= " + std::to_string(x_max) +
      " and nu <= " + std::to_string(nu_cap) +
      "; best log ratio found = " + std::to_string(best_ratio_log));
}

}  // namespace extord
