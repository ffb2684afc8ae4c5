#include "extord/arith_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace extord {

double MultFn::log_at(u64 p, u32 nu) const {
  if (log_value_at) return log_value_at(p, nu);
  return std::log(value_at(p, nu));
}

double eval(const MultFn& f, const Factored& n) {
  double prod = 1.0;
  for (const auto& pf : n.factors()) {
    double v = f.value_at(pf.p, pf.nu);
    if (v > 1e100 || prod > 1e100) return std::exp(eval_log(f, n));
    prod *= v;
  }
  return prod;
}

double eval_log(const MultFn& f, const Factored& n) {
  double s = 0.0;
  for (const auto& pf : n.factors()) s += f.log_at(pf.p, pf.nu);
  return s;
}

double log_mpz(const mpz_class& z) {
  if (z <= 0) throw ContractError("log of a non-positive integer");
  signed long e2 = 0;
  double d = mpz_get_d_2exp(&e2, z.get_mpz_t());
  return std::log(d) + static_cast<double>(e2) * std::log(2.0);
}

mpz_class sigma_a(const DivisorSystem& sys, const Factored& n) {
  if (!sys.claims_multiplicative)
    throw ContractError("sigma over divisor sets requires a multiplicative system");
  mpz_class total = 1;
  for (const auto& pf : n.factors()) {
    auto ae = admissible_checked(sys, pf.p, pf.nu);
    mpz_class local = 0, pp;
    for (u32 d : ae) {
      mpz_ui_pow_ui(pp.get_mpz_t(), static_cast<unsigned long>(pf.p), d);
      local += pp;
    }
    total *= local;
  }
  return total;
}

void PhiTable::extend(u64 p, u32 nu_max) {
  auto& v = by_prime_[p];
  if (v.empty()) v.emplace_back(1);  // phi at p^0
  mpz_class pp, sum;
  for (u32 nu = static_cast<u32>(v.size()); nu <= nu_max; ++nu) {
    auto ae = admissible_checked(*sys_, p, nu);
    // Solvability criterion: nu itself must be admissible. Checked before any
    // arithmetic so the first offending exponent is the one reported.
    if (!std::binary_search(ae.begin(), ae.end(), nu)) throw UnsolvableError(p, nu);
    mpz_ui_pow_ui(pp.get_mpz_t(), static_cast<unsigned long>(p), nu);
    sum = 0;
    for (u32 d : ae)
      if (d < nu) sum += v[d];
    mpz_class val = pp - sum;
    if (val < 1 || val > pp)
      throw std::logic_error("phi recursion left [1, p^nu]; solver invariant broken");
    v.push_back(std::move(val));
  }
}

const mpz_class& PhiTable::value(u64 p, u32 nu) {
  auto it = by_prime_.find(p);
  if (it == by_prime_.end() || it->second.size() <= nu) {
    extend(p, nu);
    it = by_prime_.find(p);
  }
  return it->second[nu];
}

PhiTable solve_phi(const DivisorSystem& sys, u64 p, u32 nu_max) {
  if (nu_max < 1) throw ContractError("nu_max must be >= 1");
  if (!is_prime(p)) throw ContractError(std::to_string(p) + " is not prime");
  PhiTable t(sys);
  t.value(p, nu_max);
  return t;
}

mpz_class phi_exponential_closed_form(u64 p, u32 nu) {
  if (nu == 0) return 1;
  mpz_class total = 0, pp;
  for (u32 k = 1; k <= nu; ++k) {
    if (nu % k != 0) continue;
    int mu = mobius(nu / k);
    if (mu == 0) continue;
    mpz_ui_pow_ui(pp.get_mpz_t(), static_cast<unsigned long>(p), k);
    if (mu > 0)
      total += pp;
    else
      total -= pp;
  }
  return total;
}

mpz_class phi_a(const DivisorSystem& sys, const Factored& n, PhiTable& cache) {
  if (&cache.system() != &sys)
    throw ContractError("phi cache belongs to a different system instance");
  mpz_class total = 1;
  for (const auto& pf : n.factors()) total *= cache.value(pf.p, pf.nu);
  return total;
}

PhiBoundsReport phi_bounds_check(const DivisorSystem& sys, u64 p, u32 nu_max) {
  if (p < 3 || !is_prime(p)) throw ContractError("phi bounds hold for odd primes only");
  if (nu_max < 1) throw ContractError("nu_max must be >= 1");
  PhiBoundsReport rep;
  rep.p = p;
  rep.nu_max = nu_max;
  const double pd = static_cast<double>(p);
  const double ratio_bound = (pd - 1.0) / (pd - 2.0);

  PhiTable t(sys);
  double worst = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  for (u32 nu = 1; nu <= nu_max; ++nu) {
    double lr = nu * std::log(pd) - log_mpz(t.value(p, nu));
    double ratio = std::exp(lr);
    max_ratio = std::max(max_ratio, ratio);
    worst = std::min(worst, ratio_bound - ratio);
  }
  rep.worst_upper_margin = worst;
  bool upper_ok = worst > 0.0;

  for (u32 e = 1; e <= nu_max; ++e) {
    auto ae = admissible_checked(sys, p, e);
    if (std::binary_search(ae.begin(), ae.end(), e - 1)) {
      rep.e_p = e;
      break;
    }
  }
  bool lower_ok = true;
  if (rep.e_p) {
    double fe = std::exp(*rep.e_p * std::log(pd) - log_mpz(t.value(p, *rep.e_p)));
    // rho(p) <= (p-1)/(p-2), so f(p^e)/ratio_bound underestimates f(p^e)/rho(p).
    double lhs = fe / ratio_bound;
    double bound = pd * (pd - 2.0) / (pd * pd - 2.0 * pd + 2.0);
    rep.lower_margin = lhs - bound;
    lower_ok = lhs >= bound - 1e-12;
  }
  rep.pass = upper_ok && lower_ok;
  return rep;
}

double convolve_at(const DivisorSystem& sys, const MultFn& f, const MultFn& g,
                   const Factored& n) {
  double total = 0.0;
  for (const Factored& d : a_divisors(sys, n)) total += eval(f, d) * eval(g, n.quotient(d));
  return total;
}

namespace {

double sigma_ratio(const DivisorSystem& sys, u64 p, u32 nu) {
  auto ae = admissible_checked(sys, p, nu);
  double sum = 0.0;
  for (u32 d : ae)
    sum += std::pow(static_cast<double>(p),
                    static_cast<double>(d) - static_cast<double>(nu));
  return sum;
}

double phi_log_ratio(const DivisorSystem& sys, u64 p, u32 nu) {
  if (nu == 0) return 0.0;
  PhiTable t(sys);
  return nu * std::log(static_cast<double>(p)) - log_mpz(t.value(p, nu));
}

}  // namespace

MultFn sigma_over_id_fn(const DivisorSystem& sys) {
  MultFn f;
  f.name = "sigma_a/id[" + sys.name + "]";
  f.sigma_form = true;
  f.value_at = [s = sys](u64 p, u32 nu) { return sigma_ratio(s, p, nu); };
  if (sys.name == "standard") {
    f.rho_hint = RhoHint{[](u64 p) { return 1.0 / (1.0 - 1.0 / static_cast<double>(p)); },
                         [](u64) { return std::optional<u32>{}; }};
    f.tail_envelope = TailEnvelope{0.0, 2};
  } else if (sys.name == "unitary") {
    f.rho_hint = RhoHint{[](u64 p) { return 1.0 + 1.0 / static_cast<double>(p); },
                         [](u64) { return std::optional<u32>(1); }};
    f.tail_envelope = TailEnvelope{1.0, 2};
    f.monotone_beyond = 1;  // (p^nu + 1)/p^nu decreases in nu
  } else if (sys.name == "exponential") {
    f.rho_hint = RhoHint{[](u64 p) { return 1.0 + 1.0 / static_cast<double>(p); },
                         [](u64) { return std::optional<u32>(2); }};
    f.tail_envelope = TailEnvelope{1.0, 2};
  }
  return f;
}

MultFn id_over_phi_fn(const DivisorSystem& sys) {
  MultFn f;
  f.name = "id/phi_a[" + sys.name + "]";
  f.log_value_at = [s = sys](u64 p, u32 nu) { return phi_log_ratio(s, p, nu); };
  f.value_at = [s = sys](u64 p, u32 nu) { return std::exp(phi_log_ratio(s, p, nu)); };
  const bool std_like = sys.name == "standard" || sys.name == "unitary";
  if (std_like || sys.name == "exponential") {
    f.rho_hint = RhoHint{[](u64 p) { return 1.0 / (1.0 - 1.0 / static_cast<double>(p)); },
                         [at = std_like ? 1u : 2u](u64) { return std::optional<u32>(at); }};
    f.tail_envelope = TailEnvelope{0.0, 2};
    if (std_like) f.monotone_beyond = 1;
  }
  return f;
}

}  // namespace extord
