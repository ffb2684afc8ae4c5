#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "extord/extremal.hpp"
#include "extord/primes.hpp"

using namespace extord;

namespace {

std::vector<u64> naive_primes(u64 limit) {
  std::vector<bool> comp(limit + 1, false);
  std::vector<u64> out;
  for (u64 i = 2; i <= limit; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) comp[j] = true;
  }
  return out;
}

}  // namespace

TEST_CASE("prime table matches a naive sieve") {
  auto naive = naive_primes(100000);
  PrimeTable table(100000);
  REQUIRE(table.primes() == naive);
  CHECK(table.count() == 9592);
  CHECK(PrimeTable(10000).count() == 1229);
  CHECK(primes_up_to(1000000).count() == 78498);
}

TEST_CASE("prime table edge cases and the ceiling guard") {
  CHECK(PrimeTable(0).count() == 0);
  CHECK(PrimeTable(1).count() == 0);
  CHECK(PrimeTable(2).primes() == std::vector<u64>{2});
  CHECK_THROWS_AS(PrimeTable(1000, 100), ResourceLimitError);
}

TEST_CASE("miller-rabin agrees with a sieve and known hard cases") {
  auto naive = naive_primes(20000);
  for (u64 n = 0; n <= 20000; ++n)
    CHECK(is_prime(n) == std::binary_search(naive.begin(), naive.end(), n));
  CHECK(!is_prime(561));                    // 3 * 11 * 17
  CHECK(!is_prime(3215031751ull));          // 151 * 751 * 28351, fools bases 2,3,5,7
  CHECK(is_prime(2147483647ull));           // 2^31 - 1
  CHECK(is_prime(2305843009213693951ull));  // 2^61 - 1
  CHECK(!is_prime(~0ull));                  // 2^64 - 1 = 3 * 5 * 17 * 257 * 641 * 65537 * 6700417
}

TEST_CASE("factorize round-trips and reproduces known factorizations") {
  CHECK(factorize(1).is_one());
  CHECK(factorize(2).to_string() == "2");
  CHECK(factorize(40).to_string() == "2^3 * 5");
  std::vector<PrimeFactor> expect{{71, 1}, {839, 1}, {1471, 1}, {6857, 1}};
  CHECK(factorize(600851475143ull).factors() == expect);
  CHECK(factorize(1ull << 60).factors() == std::vector<PrimeFactor>{{2, 60}});
  CHECK(factorize(2305843009213693951ull).factors() ==
        std::vector<PrimeFactor>{{2305843009213693951ull, 1}});

  std::mt19937_64 rng(20260814);
  for (int i = 0; i < 300; ++i) {
    u64 n = rng() % 1000000000000ull + 2;
    Factored fn = factorize(n);
    CHECK(fn.value_u64() == n);
    u64 last_p = 0;
    for (const auto& pf : fn.factors()) {
      CHECK(is_prime(pf.p));
      CHECK(pf.nu >= 1);
      CHECK(pf.p > last_p);
      last_p = pf.p;
    }
  }
}

TEST_CASE("factored value algebra") {
  Factored a = factorize(12), b = factorize(35);
  CHECK(a.times_coprime(b) == factorize(420));
  CHECK_THROWS_AS(a.times_coprime(factorize(10)), ContractError);  // shares the prime 2
  CHECK(factorize(420).quotient(a) == b);
  CHECK_THROWS_AS(a.quotient(factorize(8)), ContractError);  // 2^3 does not divide 2^2 * 3
  CHECK(factorize(48).exponent_of(2) == 4);
  CHECK(factorize(48).exponent_of(5) == 0);
  CHECK(factorize(48).log_value() == doctest::Approx(std::log(48.0)).epsilon(1e-14));
  CHECK(Factored::from_factors({{2, 63}}).value_u64() == (1ull << 63));
  CHECK_THROWS_AS(Factored::from_factors({{2, 64}}).value_u64(), ContractError);
  CHECK_THROWS_AS(Factored::from_factors({{4, 1}}), ContractError);          // 4 is not prime
  CHECK_THROWS_AS(Factored::from_factors({{2, 0}}), ContractError);          // zero exponent
  CHECK_THROWS_AS(Factored::from_factors({{3, 1}, {2, 1}}), ContractError);  // unsorted
}

TEST_CASE("mobius values and the divisor-sum identity") {
  int expect[21] = {0, 1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1, 0, -1, 0, -1, 0};
  for (u32 n = 1; n <= 20; ++n) CHECK(mobius(n) == expect[n]);
  for (u32 n = 1; n <= 1000; ++n) {
    int s = 0;
    for (u32 d = 1; d <= n; ++d)
      if (n % d == 0) s += mobius(d);
    CHECK(s == (n == 1 ? 1 : 0));
  }
}

TEST_CASE("mertens product: exact small values and the limit behavior") {
  CHECK(mertens_product(2) == doctest::Approx(2.0).epsilon(1e-15));
  // (1-1/2)^-1 (1-1/3)^-1 (1-1/5)^-1 (1-1/7)^-1 = 2 * 3/2 * 5/4 * 7/6
  CHECK(mertens_product(10) == doctest::Approx(4.375).epsilon(1e-14));
  PrimeTable table(1000000);
  CHECK(std::exp(log_mertens_product(table, 1000)) ==
        doctest::Approx(mertens_product(1000)).epsilon(1e-13));
  for (u64 x : {10000ull, 100000ull, 1000000ull}) {
    double r = mertens_product(table, x) / (kExpGamma * std::log(static_cast<double>(x)));
    CHECK(std::fabs(r - 1.0) < 0.01);
  }
  CHECK(std::fabs(mertens_product(table, 1000000) / (kExpGamma * std::log(1e6)) - 1.0) < 1e-4);
}
