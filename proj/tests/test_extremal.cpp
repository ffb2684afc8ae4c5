#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "extord/extremal.hpp"

using namespace extord;

TEST_CASE("rho estimates for the builtin sigma variants") {
  auto su = sigma_over_id_fn(builtin_system("unitary"));
  auto r = rho(su, 2);
  CHECK(r.value == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(r.attained_at == 1u);
  CHECK(r.status == RhoStatus::Exact);
  auto ss = sigma_over_id_fn(builtin_system("standard"));
  auto r2 = rho(ss, 2);
  CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(!r2.attained_at.has_value());  // the sup is a limit, not attained
  CHECK(r2.status == RhoStatus::Exact);
  auto se = sigma_over_id_fn(builtin_system("exponential"));
  auto r3 = rho(se, 2);
  CHECK(r3.value == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(r3.attained_at == 2u);
}

TEST_CASE("rho scan status depends on a monotonicity certificate") {
  MultFn f;
  f.name = "bump";
  f.value_at = [](u64, u32 nu) { return nu == 0 ? 1.0 : 1.0 + 1.0 / (nu * nu); };
  auto r = rho(f, 5, 32);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r.status == RhoStatus::ScanBounded);
  f.monotone_beyond = 1;
  CHECK(rho(f, 5, 32).status == RhoStatus::Exact);
}

TEST_CASE("local factors of sigma/id collapse to 1 and infinities are loud") {
  auto ss = sigma_over_id_fn(builtin_system("standard"));
  for (u64 p : {2ull, 3ull, 5ull, 1009ull}) CHECK(std::fabs(local_factor(ss, p) - 1.0) <= 1e-15);
  MultFn bad;
  bad.name = "divergent";
  bad.value_at = [](u64, u32) { return 1.0; };
  bad.rho_hint = RhoHint{[](u64) { return std::numeric_limits<double>::infinity(); },
                         [](u64) { return std::optional<u32>(); }};
  CHECK_THROWS_AS(local_factor(bad, 2), InfiniteLocalFactorError);
}

TEST_CASE("alternating decomposition of local factors") {
  auto su = sigma_over_id_fn(builtin_system("unitary"));
  CHECK(alternating_decomposition(su, 2) == std::vector<u32>{2});
  CHECK(alternating_decomposition(su, 97) == std::vector<u32>{2});
  auto ss = sigma_over_id_fn(builtin_system("standard"));
  CHECK(alternating_decomposition(ss, 2).empty());  // local factor is exactly 1
  auto se = sigma_over_id_fn(builtin_system("exponential"));
  auto dec = alternating_decomposition(se, 2);
  REQUIRE(!dec.empty());
  double lf = 0.5 * rho(se, 2).value;
  double resum = 1.0, sign = -1.0;
  for (u32 a : dec) {
    resum += sign * std::pow(2.0, -static_cast<double>(a));
    sign = -sign;
  }
  CHECK(resum == doctest::Approx(lf).epsilon(1e-12));
  MultFn notsigma;
  notsigma.name = "x";
  notsigma.value_at = [](u64, u32) { return 1.0; };
  CHECK_THROWS_AS(alternating_decomposition(notsigma, 2), ContractError);
}

TEST_CASE("restricted Euler products with certified tails") {
  auto su = sigma_over_id_fn(builtin_system("unitary"));
  auto e3 = r_product(su, 1000);
  auto e6 = r_product(su, 1000000);
  CHECK(e3.certified);
  CHECK(e6.certified);
  CHECK(e3.lower <= kSixOverPiSq);
  CHECK(kSixOverPiSq <= e3.upper);
  CHECK(e6.lower <= kSixOverPiSq);
  CHECK(kSixOverPiSq <= e6.upper);
  CHECK(e6.upper - e6.lower < e3.upper - e3.lower);
  CHECK(e6.upper - e6.lower <= 1e-5);

  auto ss = sigma_over_id_fn(builtin_system("standard"));
  auto r1 = r_product(ss, 10000);
  CHECK(r1.lower <= 1.0);
  CHECK(1.0 <= r1.upper);

  MultFn bare;
  bare.name = "bare";
  bare.value_at = [](u64 p, u32 nu) { return nu ? 1.0 + 1.0 / static_cast<double>(p) : 1.0; };
  CHECK(!r_product(bare, 1000).certified);
  auto deg = r_product(bare, 1000, nullptr, nullptr, true);
  CHECK(!deg.certified);
  CHECK(deg.lower == 0.0);
  CHECK(std::isinf(deg.upper));
}

TEST_CASE("excluding a finite prime set divides out exactly their local factors") {
  auto su = sigma_over_id_fn(builtin_system("unitary"));
  auto full = r_product(su, 10000);
  auto filt = finite_set_filter({2, 5});
  auto rest = r_product(su, 10000, &filt);
  double lf = local_factor(su, 2) * local_factor(su, 5);
  CHECK(rest.lower * lf == doctest::Approx(full.lower).epsilon(1e-9));
  CHECK(rest.upper * lf == doctest::Approx(full.upper).epsilon(1e-9));
}

TEST_CASE("prime set filters") {
  auto m43 = residue_class_filter(4, 3);
  CHECK(m43.contains(3));
  CHECK(m43.contains(7));
  CHECK(m43.contains(19));
  CHECK(!m43.contains(2));
  CHECK(!m43.contains(5));
  CHECK(!m43.contains(13));
  CHECK(!m43.declared_thin);
  REQUIRE(m43.growth);
  CHECK(m43.growth->density == doctest::Approx(0.5));
  auto fin = finite_set_filter({2, 3});
  CHECK(fin.declared_thin);
  CHECK(fin.contains(2));
  CHECK(!fin.contains(5));
  CHECK_THROWS_AS(finite_set_filter({4}), ContractError);
}

TEST_CASE("the mod-4 growth floor holds against sieve data") {
  auto m43 = residue_class_filter(4, 3);
  REQUIRE(m43.growth);
  PrimeTable table(1000000);
  double acc = 0.0;
  std::size_t idx = 0;
  for (double y : {100.0, 1000.0, 100000.0, 1000000.0}) {
    while (idx < table.primes().size() && static_cast<double>(table.primes()[idx]) <= y) {
      u64 p = table.primes()[idx++];
      if (m43.contains(p)) acc += std::log1p(1.0 / static_cast<double>(p));
    }
    CHECK(acc >= m43.growth->density * std::log(std::log(y)) + m43.growth->c_lo);
  }
}

TEST_CASE("maximal order constants with audited hypotheses") {
  auto ss = sigma_over_id_fn(builtin_system("standard"));
  auto rep = maximal_order_constant(ss, 100000);
  CHECK(rep.constant.lower <= kExpGamma);
  CHECK(kExpGamma <= rep.constant.upper);
  REQUIRE(rep.audits.size() == 2);
  CHECK(rep.audits[0].pass);
  CHECK(rep.audits[1].pass);
  CHECK(rep.audits[0].checked_primes == 9592);
  bool flagged = false;
  for (const auto& s : rep.assertion_flags)
    flagged = flagged || s.find("convergence") != std::string::npos;
  CHECK(flagged);

  auto su = sigma_over_id_fn(builtin_system("unitary"));
  auto rep2 = maximal_order_constant(su, 1000000);
  CHECK(rep2.constant.lower <= kSixOverPiSq * kExpGamma);
  CHECK(kSixOverPiSq * kExpGamma <= rep2.constant.upper);
  CHECK(rep2.product.certified);
}

TEST_CASE("hypothesis violations abort with the offending prime") {
  MultFn doctored;
  doctored.name = "too-big";
  doctored.value_at = [](u64 p, u32 nu) {
    if (nu == 0) return 1.0;
    return p == 2 && nu == 1 ? 9.0 : 1.0 + 1.0 / static_cast<double>(p);
  };
  try {
    maximal_order_constant(doctored, 1000);
    FAIL("expected HypothesisError");
  } catch (const HypothesisError& e) {
    CHECK(e.p == 2);
  }
}

TEST_CASE("minimal order constants for phi") {
  for (const char* name : {"standard", "unitary", "exponential"}) {
    auto rep = minimal_order_constant_phi(builtin_system(name), 100000);
    CHECK(rep.constant.lower <= kExpNegGamma);
    CHECK(kExpNegGamma <= rep.constant.upper);
    CHECK(rep.product.certified);
  }
  auto rep = minimal_order_constant_phi(pathological_two_power_system({2, 4, 8, 16}), 1000);
  CHECK(rep.constant.lower == 0.0);  // no positive floor exists at p = 2
  CHECK(rep.constant.upper > 0.0);
  CHECK(!rep.product.certified);
}
