#include "doctest.h"

#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "extord/arith_fn.hpp"

using namespace extord;

namespace {

// Independent descending solver for sum_{delta in AE_p(nu)} phi(p^delta) = p^nu.
mpz_class phi_direct(const DivisorSystem& sys, u64 p, u32 nu, std::map<u32, mpz_class>& memo) {
  if (nu == 0) return 1;
  auto it = memo.find(nu);
  if (it != memo.end()) return it->second;
  mpz_class rhs;
  mpz_ui_pow_ui(rhs.get_mpz_t(), p, nu);
  bool self = false;
  for (u32 d : admissible_checked(sys, p, nu)) {
    if (d == nu) {
      self = true;
      continue;
    }
    rhs -= phi_direct(sys, p, d, memo);
  }
  REQUIRE(self);  // nu in AE_p(nu): the recursion is solvable
  memo[nu] = rhs;
  return rhs;
}

// Deterministic pseudo-random admissible rule that always contains 0 and nu.
DivisorSystem mixed_system(u64 salt) {
  DivisorSystem sys;
  sys.name = "mixed" + std::to_string(salt);
  sys.admissible = [salt](u64 p, u32 nu) {
    if (nu == 0) return std::vector<u32>{0};
    std::vector<u32> ae{0};
    for (u32 d = 1; d < nu; ++d) {
      u64 h = (salt * 0x9E3779B97F4A7C15ull) ^ (p * 0xBF58476D1CE4E5B9ull) ^
              (static_cast<u64>(nu) << 32) ^ d;
      h ^= h >> 29;
      h *= 0x94D049BB133111EBull;
      h ^= h >> 32;
      if (h % 3 == 0) ae.push_back(d);
    }
    ae.push_back(nu);
    return ae;
  };
  return sys;
}

}  // namespace

TEST_CASE("sigma_a equals summing the divisor set") {
  for (const char* name : {"standard", "unitary", "exponential"}) {
    auto sys = builtin_system(name);
    for (u64 n = 1; n <= 3000; ++n) {
      mpz_class total = 0;
      for (const auto& d : a_divisors(sys, factorize(n))) total += d.value_u64();
      CHECK(sigma_a(sys, factorize(n)) == total);
    }
  }
  CHECK(sigma_a(builtin_system("standard"), factorize(12)) == 28);
  CHECK(sigma_a(builtin_system("unitary"), factorize(12)) == 20);
  CHECK(sigma_a(builtin_system("exponential"), factorize(12)) == 18);
}

TEST_CASE("phi closed forms for the builtin systems") {
  auto std_sys = builtin_system("standard");
  auto uni = builtin_system("unitary");
  auto expo = builtin_system("exponential");
  PhiTable ts(std_sys), tu(uni), te(expo);
  for (u64 p : {2ull, 3ull, 5ull, 97ull}) {
    for (u32 nu = 1; nu <= 24; ++nu) {
      mpz_class pw, pw1;
      mpz_ui_pow_ui(pw.get_mpz_t(), p, nu);
      mpz_ui_pow_ui(pw1.get_mpz_t(), p, nu - 1);
      CHECK(ts.value(p, nu) == pw - pw1);
      CHECK(tu.value(p, nu) == pw - 1);
      CHECK(te.value(p, nu) == phi_exponential_closed_form(p, nu));
    }
  }
  u64 expect[7] = {1, 2, 2, 6, 12, 30, 54};
  for (u32 nu = 0; nu <= 6; ++nu) CHECK(te.value(2, nu) == expect[nu]);
}

TEST_CASE("phi solver agrees with an independent descending solver") {
  for (const char* name : {"standard", "unitary", "exponential"}) {
    auto sys = builtin_system(name);
    PhiTable t(sys);
    for (u64 p : {2ull, 5ull, 13ull}) {
      std::map<u32, mpz_class> memo;
      for (u32 nu = 0; nu <= 20; ++nu) CHECK(t.value(p, nu) == phi_direct(sys, p, nu, memo));
    }
  }
  for (u64 salt = 1; salt <= 5; ++salt) {
    auto sys = mixed_system(salt);
    PhiTable t(sys);
    for (u64 p : {2ull, 11ull}) {
      std::map<u32, mpz_class> memo;
      for (u32 nu = 0; nu <= 16; ++nu) CHECK(t.value(p, nu) == phi_direct(sys, p, nu, memo));
    }
  }
}

TEST_CASE("unsolvable recursions name the first offending exponent") {
  DivisorSystem sys;
  sys.name = "holed";
  sys.admissible = [](u64, u32 nu) {
    if (nu == 3) return std::vector<u32>{0, 1, 2};  // 3 not admissible for itself
    std::vector<u32> ae(nu + 1);
    std::iota(ae.begin(), ae.end(), 0u);
    return ae;
  };
  PhiTable t(sys);
  CHECK(t.value(5, 2) == 20);  // below the hole everything works
  try {
    t.value(5, 7);
    FAIL("expected UnsolvableError");
  } catch (const UnsolvableError& e) {
    CHECK(e.p == 5);
    CHECK(e.nu == 3);
  }
  CHECK_THROWS_AS(solve_phi(sys, 2, 5), UnsolvableError);
  CHECK(solve_phi(sys, 2, 2).value(2, 2) == 2);
}

TEST_CASE("summing phi over the divisor set reconstructs n") {
  std::vector<DivisorSystem> systems;
  systems.push_back(builtin_system("standard"));
  systems.push_back(builtin_system("unitary"));
  systems.push_back(builtin_system("exponential"));
  systems.push_back(pathological_two_power_system({2, 4, 8, 16}));
  systems.push_back(mixed_system(7));
  systems.push_back(mixed_system(8));
  for (const auto& sys : systems) {
    PhiTable cache(sys);
    for (u64 n = 1; n <= 2000; ++n) {
      mpz_class total = 0;
      for (const auto& d : a_divisors(sys, factorize(n))) total += phi_a(sys, d, cache);
      CHECK(total == n);
    }
  }
}

TEST_CASE("pathological system: the gap structure inflates 2-power phi") {
  std::vector<u32> nset;
  for (u32 i = 1; i <= 10; ++i) nset.push_back(1u << i);
  auto sys = pathological_two_power_system(nset);
  PhiTable t(sys);
  CHECK(t.value(2, 2) == 1);
  CHECK(t.value(2, 3) == 8);  // AE_2(3) = {3}, so phi(8) = 8
  CHECK(t.value(2, 4) == 4);
  CHECK(t.value(2, 8) == 16);
  CHECK(t.value(2, 16) == 256);
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 2, 256);
  CHECK(t.value(2, 512) == big);  // phi(2^(2^9)) = 2^(2^8)
  CHECK(t.value(3, 2) == 6);      // standard at odd primes
}

TEST_CASE("phi_a composes multiplicatively over prime blocks") {
  auto uni = builtin_system("unitary");
  PhiTable t(uni);
  CHECK(phi_a(uni, factorize(12), t) == 6);  // (2^2 - 1)(3 - 1)
  auto std_sys = builtin_system("standard");
  PhiTable t2(std_sys);
  CHECK(phi_a(std_sys, factorize(360), t2) == 96);
  CHECK(phi_a(std_sys, Factored::one(), t2) == 1);
}

TEST_CASE("log of exact big integers") {
  mpz_class z;
  mpz_ui_pow_ui(z.get_mpz_t(), 2, 1000);
  CHECK(log_mpz(z) == doctest::Approx(1000.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(log_mpz(mpz_class(1)) == 0.0);
  CHECK(log_mpz(mpz_class(10)) == doctest::Approx(std::log(10.0)).epsilon(1e-14));
}

TEST_CASE("phi bound audit on the builtin systems") {
  for (const char* name : {"standard", "unitary", "exponential"}) {
    auto r = phi_bounds_check(builtin_system(name), 11, 20);
    CHECK(r.pass);
    CHECK(r.worst_upper_margin > 0.0);
    REQUIRE(r.e_p.has_value());
    REQUIRE(r.lower_margin.has_value());
    CHECK(*r.lower_margin >= 0.0);
  }
  CHECK(phi_bounds_check(builtin_system("standard"), 3, 10).e_p == 1u);
  CHECK(phi_bounds_check(builtin_system("exponential"), 3, 10).e_p == 2u);
}

TEST_CASE("convolution evaluates the divisor-set sum") {
  auto std_sys = builtin_system("standard");
  MultFn f = sigma_over_id_fn(std_sys);
  MultFn one;
  one.name = "one";
  one.value_at = [](u64, u32) { return 1.0; };
  // at n = 3: f(1) + f(3) = 1 + 4/3
  CHECK(convolve_at(std_sys, f, one, factorize(3)) ==
        doctest::Approx(1.0 + 4.0 / 3.0).epsilon(1e-14));
  double h12 = convolve_at(std_sys, f, one, factorize(12));
  double h4 = convolve_at(std_sys, f, one, factorize(4));
  double h3 = convolve_at(std_sys, f, one, factorize(3));
  CHECK(h12 == doctest::Approx(h4 * h3).epsilon(1e-12));
}

TEST_CASE("prime-power rules of the packaged functions") {
  auto std_sys = builtin_system("standard");
  auto f = sigma_over_id_fn(std_sys);
  CHECK(f.value_at(2, 0) == 1.0);
  CHECK(f.value_at(2, 2) == doctest::Approx(7.0 / 4.0).epsilon(1e-15));
  CHECK(f.sigma_form);
  REQUIRE(f.rho_hint);
  CHECK(f.rho_hint->value(2) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(!f.rho_hint->attained_at(2).has_value());
  auto g = id_over_phi_fn(std_sys);
  CHECK(g.value_at(2, 5) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(eval(f, factorize(12)) == doctest::Approx((7.0 / 4.0) * (4.0 / 3.0)).epsilon(1e-14));
  CHECK(eval_log(f, factorize(12)) ==
        doctest::Approx(std::log(eval(f, factorize(12)))).epsilon(1e-12));
  MultFn plain;
  plain.name = "plain";
  plain.value_at = [](u64 p, u32 nu) { return nu ? 1.0 + 1.0 / static_cast<double>(p) : 1.0; };
  CHECK(plain.log_at(3, 1) == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-14));
}
