#include "extord/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace extord {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RhoEstimate rho(const MultFn& f, u64 p, u32 scan_limit) {
  if (scan_limit < 1) throw ContractError("scan_limit must be >= 1");
  RhoEstimate est;
  est.p = p;
  if (f.rho_hint) {
    est.value = f.rho_hint->value(p);
    est.attained_at = f.rho_hint->attained_at(p);
    est.status = RhoStatus::Exact;
    if (est.value < 1.0)
      throw ContractError("rho hint below 1 at p=" + std::to_string(p) +
                          "; rho(p) >= f(1) = 1 always");
    return est;
  }
  double best = 1.0;  // nu = 0
  std::optional<u32> arg;
  for (u32 nu = 1; nu <= scan_limit; ++nu) {
    double v = f.value_at(p, nu);
    if (v > best) {
      best = v;
      arg = nu;
    }
  }
  est.value = best;
  est.attained_at = arg;
  est.status = (f.monotone_beyond && *f.monotone_beyond <= scan_limit)
                   ? RhoStatus::Exact
                   : RhoStatus::ScanBounded;
  return est;
}

double local_factor(const MultFn& f, u64 p, u32 scan_limit) {
  RhoEstimate est = rho(f, p, scan_limit);
  if (!std::isfinite(est.value)) throw InfiniteLocalFactorError(p);
  return (1.0 - 1.0 / static_cast<double>(p)) * est.value;
}

const char* to_string(TailSource s) {
  switch (s) {
    case TailSource::Envelope: return "envelope";
    case TailSource::ExactHint: return "exact-hint";
    case TailSource::None: return "none";
  }
  return "none";
}

PrimeSetFilter residue_class_filter(u64 modulus, u64 residue) {
  if (modulus < 2 || residue >= modulus) throw ContractError("need 0 <= residue < modulus, modulus >= 2");
  PrimeSetFilter s;
  s.name = "mod" + std::to_string(modulus) + "_" + std::to_string(residue);
  s.member = [modulus, residue](u64 p) { return p % modulus == residue; };
  s.declared_thin = false;
  if (modulus == 4 && residue == 3) {
    // Floor validated against sieve data on [10^2, 10^8]; the observed minimum
    // of (sum log(1+1/p) - 0.5 log log Y) there is about -0.018.
    s.growth = PrimeSetFilter::GrowthEnvelope{0.5, -0.10, 100.0};
  }
  return s;
}

PrimeSetFilter finite_set_filter(std::vector<u64> primes) {
  std::sort(primes.begin(), primes.end());
  for (u64 p : primes)
    if (!is_prime(p)) throw ContractError(std::to_string(p) + " is not prime");
  PrimeSetFilter s;
  s.name = "set";
  for (std::size_t i = 0; i < primes.size(); ++i)
    s.name += (i ? "," : ":") + std::to_string(primes[i]);
  s.member = [set = std::move(primes)](u64 p) {
    return std::binary_search(set.begin(), set.end(), p);
  };
  s.declared_thin = true;
  return s;
}

ProductEstimate r_product(const MultFn& f, u64 cutoff, const PrimeSetFilter* exclude,
                          const PrimeTable* table, bool demand_certified) {
  std::optional<PrimeTable> own;
  if (table == nullptr || table->limit() < cutoff) {
    own.emplace(cutoff);
    table = &*own;
  }
  double logsum = 0.0;
  u64 nfac = 0;
  bool all_exact = true;
  for (u64 p : table->primes()) {
    if (p > cutoff) break;
    if (exclude && exclude->contains(p)) continue;
    RhoEstimate est = rho(f, p);
    if (!std::isfinite(est.value)) throw InfiniteLocalFactorError(p);
    if (est.status != RhoStatus::Exact) all_exact = false;
    double lf = (1.0 - 1.0 / static_cast<double>(p)) * est.value;
    if (lf <= 0.0) throw ContractError("nonpositive local factor at p=" + std::to_string(p));
    logsum += std::log(lf);
    ++nfac;
  }

  ProductEstimate out;
  out.cutoff = cutoff;
  double tail = 0.0;
  if (f.tail_envelope && cutoff >= f.tail_envelope->p0) {
    const double C = f.tail_envelope->C;
    if (C == 0.0) {
      out.tail_source = TailSource::ExactHint;
    } else if (C / static_cast<double>(cutoff) <= 0.5) {
      tail = 2.0 * C / static_cast<double>(cutoff);
      out.tail_source = TailSource::Envelope;
    }
  }
  // Per-factor rounding slack: each log contributes a few ulps of error.
  const double slack = nfac ? 1e-10 + static_cast<double>(nfac) * 1e-15 : 0.0;
  out.certified = all_exact && out.tail_source != TailSource::None;
  if (!out.certified && demand_certified) {
    out.lower = 0.0;
    out.upper = kInf;
    return out;
  }
  const double pad = out.tail_source == TailSource::None ? slack : slack + tail;
  out.lower = std::exp(logsum - pad);
  out.upper = std::exp(logsum + pad);
  return out;
}

namespace {

// Scales an enclosure by a positive point factor with relative slack.
void scale_enclosure(ProductEstimate& e, double factor, double rel_slack) {
  e.lower *= factor * (1.0 - rel_slack);
  e.upper *= factor * (1.0 + rel_slack);
}

}  // namespace

ConstantReport maximal_order_constant(const MultFn& f, u64 cutoff, const PrimeSetFilter* S,
                                      const PrimeTable* table) {
  std::optional<PrimeTable> own;
  if (table == nullptr || table->limit() < cutoff) {
    own.emplace(cutoff);
    table = &*own;
  }
  ConstantReport rep;
  HypothesisAudit a1{"rho(p) <= (1-1/p)^{-1}", true, 0, 0, kInf};
  HypothesisAudit a2{"exists e_p with f(p^{e_p}) >= 1+1/p", true, 0, 0, kInf};
  constexpr u32 kScan = 64;
  for (u64 p : table->primes()) {
    if (p > cutoff) break;
    if (S && S->contains(p)) continue;
    const double pd = static_cast<double>(p);
    RhoEstimate est = rho(f, p, kScan);
    double cap = 1.0 / (1.0 - 1.0 / pd);
    double m1 = cap - est.value;
    if (m1 < -1e-12) throw HypothesisError(p, a1.inequality);
    if (m1 < a1.worst_margin) {
      a1.worst_margin = m1;
      a1.worst_p = p;
    }
    ++a1.checked_primes;

    const double want = 1.0 + 1.0 / pd;
    double fe = -kInf;
    if (est.attained_at && *est.attained_at >= 1) {
      fe = f.value_at(p, *est.attained_at);
    }
    if (!(fe >= want - 1e-12)) {
      fe = -kInf;
      for (u32 e = 1; e <= kScan; ++e) {
        double v = f.value_at(p, e);
        if (v > fe) fe = v;
        if (fe >= want - 1e-12) break;
      }
    }
    double m2 = fe - want;
    if (m2 < -1e-12) throw HypothesisError(p, a2.inequality);
    if (m2 < a2.worst_margin) {
      a2.worst_margin = m2;
      a2.worst_p = p;
    }
    ++a2.checked_primes;
  }
  rep.audits = {a1, a2};

  rep.product = r_product(f, cutoff, S, table);
  rep.constant = rep.product;
  double prefactor = 1.0;
  u64 ns = 0;
  if (S) {
    double lg = 0.0;
    for (u64 p : table->primes()) {
      if (p > cutoff) break;
      if (!S->contains(p)) continue;
      lg += std::log1p(-1.0 / static_cast<double>(p));
      ++ns;
    }
    prefactor = std::exp(lg);
    rep.assertion_flags.push_back("filter prefactor over p in S truncated at cutoff");
  }
  scale_enclosure(rep.constant, kExpGamma * prefactor,
                  1e-15 * static_cast<double>(3 + ns));
  rep.assertion_flags.push_back(
      "limit-theorem convergence hypothesis asserted by caller, not machine-checked");
  if (!rep.product.certified) {
    rep.assertion_flags.push_back(rep.product.tail_source == TailSource::None
                                      ? "uncertified: no tail envelope"
                                      : "uncertified: scan-bounded rho at some primes");
  }
  return rep;
}

ConstantReport minimal_order_constant_phi(const DivisorSystem& sys, u64 cutoff,
                                          const PrimeTable* table) {
  std::optional<PrimeTable> own;
  if (table == nullptr || table->limit() < cutoff) {
    own.emplace(cutoff);
    table = &*own;
  }
  ConstantReport rep;
  constexpr u32 kSolvScan = 8;
  constexpr u32 kEScan = 64;
  HypothesisAudit a1{"nu in AE_p(nu) for nu <= " + std::to_string(kSolvScan), true, 0, 0, kInf};
  HypothesisAudit a2{"exists e_p (p > 2) with e_p - 1 in AE_p(e_p)", true, 0, 0, kInf};

  double lo_sum = 0.0, hi_sum = 0.0;
  u64 nfac = 0;
  bool hinted_everywhere = true;
  for (u64 p : table->primes()) {
    if (p > cutoff) break;
    const double pd = static_cast<double>(p);
    for (u32 nu = 1; nu <= kSolvScan; ++nu) {
      auto ae = admissible_checked(sys, p, nu);
      if (!std::binary_search(ae.begin(), ae.end(), nu))
        throw UnsolvableError(p, nu);
    }
    ++a1.checked_primes;
    if (p > 2) {
      std::optional<u32> ep;
      for (u32 e = 1; e <= kEScan; ++e) {
        auto ae = admissible_checked(sys, p, e);
        if (std::binary_search(ae.begin(), ae.end(), e - 1)) {
          ep = e;
          break;
        }
      }
      if (!ep) throw HypothesisError(p, a2.inequality);
      ++a2.checked_primes;
    }

    std::optional<double> hint_inf;
    if (sys.phi_inf_hint && sys.phi_inf_hint->value) hint_inf = sys.phi_inf_hint->value(p);
    const double inv = 1.0 / (1.0 - 1.0 / pd);  // (1-1/p)^{-1}
    if (hint_inf) {
      double lf = *hint_inf * inv;
      lo_sum += std::log(lf);
      hi_sum += std::log(lf);
    } else {
      hinted_everywhere = false;
      // Scan gives an upper bound for the inf; the analytic floor gives a lower
      // bound: (p-2)/(p-1) for odd p, 0 at p=2 (no nontrivial floor exists).
      double scan_min = 1.0;
      PhiTable t(sys);
      for (u32 nu = 1; nu <= kEScan; ++nu) {
        double r = std::exp(log_mpz(t.value(p, nu)) - nu * std::log(pd));
        scan_min = std::min(scan_min, r);
      }
      double floor = p == 2 ? 0.0 : (pd - 2.0) / (pd - 1.0);
      hi_sum += std::log(scan_min * inv);
      lo_sum += floor == 0.0 ? -kInf : std::log(floor * inv);
    }
    ++nfac;
  }
  rep.audits = {a1, a2};

  double tail = 0.0;
  ProductEstimate prod;
  prod.cutoff = cutoff;
  if (hinted_everywhere) {
    prod.tail_source = TailSource::ExactHint;
    prod.certified = true;
    rep.assertion_flags.push_back("per-prime inf hint asserted beyond cutoff");
  } else if (sys.phi_inf_hint) {
    // Hint present but declined somewhere (pathological p=2): the declining
    // primes are inside the cutoff; the tail beyond is still hint-covered.
    prod.tail_source = TailSource::ExactHint;
    prod.certified = false;
    rep.assertion_flags.push_back("per-prime inf hint asserted beyond cutoff");
    rep.assertion_flags.push_back("uncertified: scan enclosure at primes without hints");
  } else {
    // Under the e_p hypothesis the local factor lies in [1-1/(p-1)^2, 1+2/p^2],
    // so |log| <= 2.5/(p-1)^2 and the tail is below 3/cutoff.
    tail = 3.0 / static_cast<double>(cutoff);
    prod.tail_source = TailSource::Envelope;
    prod.certified = false;
    rep.assertion_flags.push_back(
        "uncertified: tail assumes the e_p hypothesis beyond cutoff");
  }
  const double slack = 1e-10 + static_cast<double>(nfac) * 1e-15 + tail;
  prod.lower = std::exp(lo_sum - slack);
  prod.upper = std::exp(hi_sum + slack);
  rep.product = prod;
  rep.constant = prod;
  scale_enclosure(rep.constant, kExpNegGamma, 3e-15);
  rep.assertion_flags.push_back(
      "limit-theorem convergence hypothesis asserted by caller, not machine-checked");
  rep.assertion_flags.push_back("solvability spot-checked for nu <= " +
                                std::to_string(kSolvScan) + " below cutoff");
  return rep;
}

std::vector<u32> alternating_decomposition(const MultFn& f, u64 p, u32 max_depth) {
  if (!f.sigma_form)
    throw ContractError("alternating decomposition requires a sigma-form function");
  RhoEstimate est = rho(f, p, 64);
  if (est.status != RhoStatus::Exact)
    throw ContractError("alternating decomposition requires exact rho status");
  if (!std::isfinite(est.value)) throw InfiniteLocalFactorError(p);
  const double pd = static_cast<double>(p);
  const double lf = (1.0 - 1.0 / pd) * est.value;
  double t = 1.0 - lf;
  if (t < -1e-12)
    throw ContractError("local factor exceeds 1; not a sigma-form alternating value");
  std::vector<u32> out;
  u32 lo = 2;
  while (out.size() < max_depth && t > 1e-12) {
    u32 a = lo;
    // Smallest exponent with p^{-a} <= t (up to rounding): the greedy digit.
    while (a < 4096 && std::pow(pd, -static_cast<double>(a)) > t * (1.0 + 1e-9)) ++a;
    if (a >= 4096) break;  // residual below representable dust
    out.push_back(a);
    t = std::pow(pd, -static_cast<double>(a)) - t;
    lo = a + 1;
  }
  return out;
}

}  // namespace extord
