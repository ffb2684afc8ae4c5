#include "extord/primes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace extord {

namespace {

std::vector<u32> small_primes_up_to(u32 n) {
  std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
  std::vector<u32> out;
  for (u32 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = static_cast<u64>(i) * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

u64 isqrt_u64(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// One strong-pseudoprime round; n - 1 = d * 2^s with d odd.
bool sprp(u64 n, u64 a, u64 d, int s) {
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

u64 pollard_brent(u64 n) {
  // n odd composite, not a prime power of a small prime. Standard Brent cycle finding.
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    u64 q = 1;
    int power = 1, lam = 0;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    y = f(x);
    while (d == 1) {
      if (power == lam) {
        x = y;
        power *= 2;
        lam = 0;
      }
      y = f(y);
      ++lam;
      u64 diff = x > y ? x - y : y - x;
      if (diff == 0) break;
      q = mulmod(q, diff, n);
      if (lam % 64 == 0 || power == lam) {
        d = std::gcd(q, n);
        q = 1;
      }
    }
    if (d == 1) {
      d = std::gcd(q, n);
    }
    if (d != 1 && d != n) return d;
    // cycle collapsed or found n itself: retry with the next constant
  }
}

void factor_rec(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

Factored Factored::from_factors(std::vector<PrimeFactor> fs) {
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].nu == 0) throw ContractError("factor exponent must be >= 1");
    if (i > 0 && fs[i - 1].p >= fs[i].p)
      throw ContractError("factor primes must be strictly increasing");
    if (!is_prime(fs[i].p))
      throw ContractError("factor base " + std::to_string(fs[i].p) + " is not prime");
  }
  Factored f;
  f.fs_ = std::move(fs);
  return f;
}

u32 Factored::exponent_of(u64 p) const {
  auto it = std::lower_bound(fs_.begin(), fs_.end(), p,
                             [](const PrimeFactor& f, u64 v) { return f.p < v; });
  return (it != fs_.end() && it->p == p) ? it->nu : 0;
}

double Factored::log_value() const {
  double s = 0.0;
  for (const auto& f : fs_) s += f.nu * std::log(static_cast<double>(f.p));
  return s;
}

u64 Factored::value_u64() const {
  u128 r = 1;
  for (const auto& f : fs_) {
    for (u32 i = 0; i < f.nu; ++i) {
      r *= f.p;
      if (r > ~static_cast<u64>(0)) throw ContractError("value exceeds 64 bits: " + to_string());
    }
  }
  return static_cast<u64>(r);
}

std::string Factored::to_string() const {
  if (fs_.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < fs_.size(); ++i) {
    if (i) os << " * ";
    os << fs_[i].p;
    if (fs_[i].nu > 1) os << "^" << fs_[i].nu;
  }
  return os.str();
}

Factored Factored::times_coprime(const Factored& other) const {
  std::vector<PrimeFactor> merged;
  merged.reserve(fs_.size() + other.fs_.size());
  std::size_t i = 0, j = 0;
  while (i < fs_.size() && j < other.fs_.size()) {
    if (fs_[i].p == other.fs_[j].p)
      throw ContractError("operands share the prime " + std::to_string(fs_[i].p));
    merged.push_back(fs_[i].p < other.fs_[j].p ? fs_[i++] : other.fs_[j++]);
  }
  while (i < fs_.size()) merged.push_back(fs_[i++]);
  while (j < other.fs_.size()) merged.push_back(other.fs_[j++]);
  Factored f;
  f.fs_ = std::move(merged);
  return f;
}

Factored Factored::quotient(const Factored& d) const {
  std::vector<PrimeFactor> out;
  out.reserve(fs_.size());
  std::size_t j = 0;
  for (const auto& f : fs_) {
    u32 sub = 0;
    if (j < d.fs_.size() && d.fs_[j].p == f.p) sub = d.fs_[j++].nu;
    if (sub > f.nu) throw ContractError("quotient would have a negative exponent at p=" +
                                        std::to_string(f.p));
    if (f.nu > sub) out.push_back({f.p, f.nu - sub});
  }
  if (j < d.fs_.size())
    throw ContractError("divisor has a prime absent from the numerator: " +
                        std::to_string(d.fs_[j].p));
  Factored f;
  f.fs_ = std::move(out);
  return f;
}

PrimeTable::PrimeTable(u64 limit, u64 ceiling) : limit_(limit) {
  if (limit > ceiling)
    throw ResourceLimitError("sieve limit " + std::to_string(limit) + " exceeds the ceiling " +
                             std::to_string(ceiling) +
                             "; raise sieve_ceiling explicitly if this is intended");
  if (limit < 2) return;
  const u64 root = isqrt_u64(limit);
  const auto base = small_primes_up_to(static_cast<u32>(root));
  if (limit > 100)
    primes_.reserve(static_cast<std::size_t>(
        static_cast<double>(limit) / (std::log(static_cast<double>(limit)) - 1.1)));
  constexpr u64 kSegment = 1u << 20;
  std::vector<bool> seg;
  for (u64 lo = 2; lo <= limit; lo += kSegment) {
    const u64 hi = std::min(limit, lo + kSegment - 1);
    seg.assign(static_cast<std::size_t>(hi - lo + 1), true);
    for (u32 p : base) {
      const u64 pp = static_cast<u64>(p) * p;
      if (pp > hi) break;
      u64 start = std::max(pp, (lo + p - 1) / p * p);
      for (u64 j = start; j <= hi; j += p) seg[static_cast<std::size_t>(j - lo)] = false;
    }
    for (u64 i = lo; i <= hi; ++i)
      if (seg[static_cast<std::size_t>(i - lo)]) primes_.push_back(i);
  }
}

PrimeTable primes_up_to(u64 x, u64 ceiling) { return PrimeTable(x, ceiling); }

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  // This base set decides primality for every 64-bit integer.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (!sprp(n, a, d, s)) return false;
  }
  return true;
}

Factored factorize(u64 n) {
  if (n == 0) throw ContractError("cannot factor 0");
  static const std::vector<u32> trial = small_primes_up_to(65536);
  std::vector<PrimeFactor> fs;
  for (u32 p : trial) {
    if (static_cast<u64>(p) * p > n) break;
    if (n % p == 0) {
      u32 nu = 0;
      while (n % p == 0) {
        n /= p;
        ++nu;
      }
      fs.push_back({p, nu});
    }
  }
  if (n > 1) {
    if (n <= 0xFFFFFFFFull || is_prime(n)) {
      // Below 2^32 a cofactor surviving trial division to 2^16 is prime.
      fs.push_back({n, 1});
    } else {
      std::vector<u64> big;
      factor_rec(n, big);
      std::sort(big.begin(), big.end());
      for (std::size_t i = 0; i < big.size();) {
        std::size_t j = i;
        while (j < big.size() && big[j] == big[i]) ++j;
        fs.push_back({big[i], static_cast<u32>(j - i)});
        i = j;
      }
    }
  }
  std::sort(fs.begin(), fs.end(),
            [](const PrimeFactor& a, const PrimeFactor& b) { return a.p < b.p; });
  // from_factors revalidates (ordering and primality); cheap at this call rate
  // and catches splitter bugs immediately.
  return Factored::from_factors(std::move(fs));
}

int mobius(u32 n) {
  if (n == 0) throw ContractError("mobius is defined for n >= 1");
  int sign = 1;
  for (u32 p = 2; static_cast<u64>(p) * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      sign = -sign;
    }
  }
  if (n > 1) sign = -sign;
  return sign;
}

double log_mertens_product(const PrimeTable& table, u64 x) {
  if (x > table.limit()) throw ContractError("mertens bound exceeds the prime table limit");
  double s = 0.0;
  for (u64 p : table.primes()) {
    if (p > x) break;
    s -= std::log1p(-1.0 / static_cast<double>(p));
  }
  return s;
}

double mertens_product(const PrimeTable& table, u64 x) {
  return std::exp(log_mertens_product(table, x));
}

double mertens_product(u64 x) {
  PrimeTable t(x);
  return mertens_product(t, x);
}

}  // namespace extord
