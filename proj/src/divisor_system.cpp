#include "extord/divisor_system.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace extord {

std::vector<u32> admissible_checked(const DivisorSystem& sys, u64 p, u32 nu) {
  std::vector<u32> ae = sys.admissible(p, nu);
  if (nu == 0) {
    if (ae.size() != 1 || ae[0] != 0)
      throw MalformedSystemError("system '" + sys.name + "': AE_" + std::to_string(p) +
                                 "(0) must be {0}");
    return ae;
  }
  if (ae.empty())
    throw MalformedSystemError("system '" + sys.name + "': AE_" + std::to_string(p) + "(" +
                               std::to_string(nu) + ") is empty");
  for (std::size_t i = 0; i < ae.size(); ++i) {
    if (ae[i] > nu)
      throw MalformedSystemError("system '" + sys.name + "': AE_" + std::to_string(p) + "(" +
                                 std::to_string(nu) + ") contains " + std::to_string(ae[i]) +
                                 " > nu");
    if (i > 0 && ae[i - 1] >= ae[i])
      throw MalformedSystemError("system '" + sys.name + "': AE_" + std::to_string(p) + "(" +
                                 std::to_string(nu) + ") is not strictly increasing");
  }
  return ae;
}

DivisorSystem builtin_system(BuiltinSystem kind) {
  DivisorSystem sys;
  switch (kind) {
    case BuiltinSystem::Standard:
      sys.name = "standard";
      sys.admissible = [](u64, u32 nu) {
        std::vector<u32> ae(nu + 1);
        std::iota(ae.begin(), ae.end(), 0u);
        return ae;
      };
      sys.phi_inf_hint = PhiInfHint{
          [](u64 p) { return std::optional<double>(1.0 - 1.0 / static_cast<double>(p)); },
          [](u64) { return std::optional<u32>(1); }};
      break;
    case BuiltinSystem::Unitary:
      sys.name = "unitary";
      sys.admissible = [](u64, u32 nu) {
        return nu == 0 ? std::vector<u32>{0} : std::vector<u32>{0, nu};
      };
      // inf of p^nu - 1 over p^nu is approached as nu grows but the minimum of
      // phi/p^nu over nu >= 1 is at nu = 1: (p-1)/p, matching the standard value.
      sys.phi_inf_hint = PhiInfHint{
          [](u64 p) { return std::optional<double>(1.0 - 1.0 / static_cast<double>(p)); },
          [](u64) { return std::optional<u32>(1); }};
      break;
    case BuiltinSystem::Exponential:
      sys.name = "exponential";
      sys.admissible = [](u64, u32 nu) {
        if (nu == 0) return std::vector<u32>{0};
        std::vector<u32> ae;
        for (u32 d = 1; d <= nu; ++d)
          if (nu % d == 0) ae.push_back(d);
        return ae;
      };
      sys.phi_inf_hint = PhiInfHint{
          [](u64 p) { return std::optional<double>(1.0 - 1.0 / static_cast<double>(p)); },
          [](u64) { return std::optional<u32>(2); }};
      break;
  }
  return sys;
}

DivisorSystem builtin_system(const std::string& name) {
  if (name == "standard") return builtin_system(BuiltinSystem::Standard);
  if (name == "unitary") return builtin_system(BuiltinSystem::Unitary);
  if (name == "exponential") return builtin_system(BuiltinSystem::Exponential);
  throw ContractError("unknown builtin system '" + name + "'");
}

DivisorSystem pathological_two_power_system(std::vector<u32> exponent_set) {
  if (exponent_set.empty()) throw ContractError("exponent set must be nonempty");
  for (std::size_t i = 0; i < exponent_set.size(); ++i) {
    if (exponent_set[i] == 0) throw ContractError("exponent set entries must be positive");
    if (i > 0 && exponent_set[i - 1] >= exponent_set[i])
      throw ContractError("exponent set must be strictly increasing");
  }
  DivisorSystem sys;
  sys.name = "pathological2";
  auto in_set = [set = std::move(exponent_set)](u32 nu) {
    return std::binary_search(set.begin(), set.end(), nu);
  };
  sys.admissible = [in_set](u64 p, u32 nu) {
    if (nu == 0) return std::vector<u32>{0};
    if (p != 2 || in_set(nu)) {
      std::vector<u32> ae(nu + 1);
      std::iota(ae.begin(), ae.end(), 0u);
      return ae;
    }
    return std::vector<u32>{nu};
  };
  // At odd primes the system is standard, so the per-prime inf is (p-1)/p at
  // nu=1. At p=2 the inf depends on the gap structure; no closed form offered.
  sys.phi_inf_hint = PhiInfHint{
      [](u64 p) {
        return p == 2 ? std::nullopt
                      : std::optional<double>(1.0 - 1.0 / static_cast<double>(p));
      },
      [](u64 p) { return p == 2 ? std::nullopt : std::optional<u32>(1); }};
  return sys;
}

std::vector<Factored> a_divisors(const DivisorSystem& sys, const Factored& n) {
  if (!sys.claims_multiplicative)
    throw ContractError("a_divisors requires a multiplicative system; '" + sys.name +
                        "' does not claim it");
  const auto& fs = n.factors();
  std::vector<std::vector<u32>> sets;
  sets.reserve(fs.size());
  for (const auto& f : fs) sets.push_back(admissible_checked(sys, f.p, f.nu));

  std::vector<Factored> out;
  std::size_t total = 1;
  for (const auto& s : sets) total *= s.size();
  out.reserve(total);
  std::vector<std::size_t> idx(sets.size(), 0);
  for (;;) {
    std::vector<PrimeFactor> divisor;
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (u32 d = sets[i][idx[i]]; d > 0) divisor.push_back({fs[i].p, d});
    Factored d;
    d = Factored::from_factors(std::move(divisor));
    out.push_back(std::move(d));
    // Odometer with the last component fastest = lexicographic tuple order.
    std::size_t i = sets.size();
    while (i > 0) {
      --i;
      if (++idx[i] < sets[i].size()) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
    if (sets.empty()) return out;  // n = 1: the single empty tuple was emitted
  }
}

namespace {

// The divisor set of n as plain integers, via the rule the checker trusts least:
// enumerate every divisor of n and keep those whose exponents are admissible
// per prime. Systems with a composite-level override use that instead.
std::vector<u64> divisor_set_direct(const DivisorSystem& sys, u64 n) {
  if (sys.composite_override) {
    auto v = sys.composite_override(n);
    std::sort(v.begin(), v.end());
    return v;
  }
  Factored fn = factorize(n);
  const auto& fs = fn.factors();
  std::vector<std::vector<u32>> admissible;
  for (const auto& f : fs) admissible.push_back(admissible_checked(sys, f.p, f.nu));
  std::vector<u64> out;
  std::vector<u32> exps(fs.size(), 0);
  for (;;) {
    bool ok = true;
    u64 d = 1;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (!std::binary_search(admissible[i].begin(), admissible[i].end(), exps[i])) {
        ok = false;
        break;
      }
      for (u32 k = 0; k < exps[i]; ++k) d *= fs[i].p;
    }
    if (ok) out.push_back(d);
    std::size_t i = 0;
    for (; i < fs.size(); ++i) {
      if (++exps[i] <= fs[i].nu) break;
      exps[i] = 0;
    }
    if (i == fs.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SystemWitness check_multiplicative(const DivisorSystem& sys, u64 bound) {
  if (bound < 2 || bound > 10'000)
    throw ContractError("check_multiplicative bound must be in [2, 10^4]");
  // Validate the AE_p(0) normalization up front for every prime in range.
  for (u64 p = 2; p <= bound; ++p)
    if (is_prime(p)) admissible_checked(sys, p, 0);

  SystemWitness w;
  for (u64 m = 2; m <= bound; ++m) {
    Factored fm = factorize(m);
    const auto& fs = fm.factors();
    if (fs.size() < 2) continue;  // prime powers split only trivially
    auto lhs = divisor_set_direct(sys, m);
    // Every coprime split corresponds to a subset of the prime components;
    // by symmetry take subsets containing the first prime.
    const u32 parts = static_cast<u32>(fs.size());
    for (u32 mask = 0; mask < (1u << (parts - 1)); ++mask) {
      u64 n1 = 1, n2 = 1;
      for (u32 i = 0; i < parts; ++i) {
        u64 pp = 1;
        for (u32 k = 0; k < fs[i].nu; ++k) pp *= fs[i].p;
        if (i == 0 || (mask >> (i - 1)) & 1)
          n1 *= pp;
        else
          n2 *= pp;
      }
      if (n2 == 1) continue;
      auto d1 = divisor_set_direct(sys, n1);
      auto d2 = divisor_set_direct(sys, n2);
      std::vector<u64> rhs;
      rhs.reserve(d1.size() * d2.size());
      for (u64 a : d1)
        for (u64 b : d2) rhs.push_back(a * b);
      std::sort(rhs.begin(), rhs.end());
      if (rhs != lhs) {
        w.consistent = false;
        w.n1 = n1;
        w.n2 = n2;
        std::vector<u64> diff;
        std::set_symmetric_difference(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                                      std::back_inserter(diff));
        w.offending_divisor = diff.empty() ? 0 : diff.front();
        std::ostringstream os;
        os << "A(" << n1 * n2 << ") != A(" << n1 << ")*A(" << n2 << "); divisor "
           << w.offending_divisor << " appears on exactly one side";
        w.detail = os.str();
        return w;
      }
    }
  }
  return w;
}

}  // namespace extord
