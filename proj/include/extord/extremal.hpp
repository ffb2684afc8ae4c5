#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "extord/arith_fn.hpp"
#include "extord/primes.hpp"

namespace extord {

// Embedded constants, accurate to the last bit of a double.
inline constexpr double kExpGamma = 1.7810724179901979852;     // e^gamma
inline constexpr double kExpNegGamma = 0.5614594835668851698;  // e^{-gamma}
inline constexpr double kSixOverPiSq = 0.6079271018540266287;  // 6/pi^2 = 1/zeta(2)

enum class RhoStatus { Exact, ScanBounded };

struct RhoEstimate {
  u64 p = 0;
  double value = 1.0;  // may be +infinity when a hint declares it
  std::optional<u32> attained_at;
  RhoStatus status = RhoStatus::ScanBounded;
};

// sup_nu f(p^nu): from the hint when present (exact), otherwise a scan over
// nu <= scan_limit, exact only under a monotone-beyond certificate.
RhoEstimate rho(const MultFn& f, u64 p, u32 scan_limit = 64);

// (1 - 1/p) * rho(p); throws InfiniteLocalFactorError when rho(p) = infinity.
double local_factor(const MultFn& f, u64 p, u32 scan_limit = 64);

enum class TailSource { Envelope, ExactHint, None };

const char* to_string(TailSource s);

struct ProductEstimate {
  double lower = 1.0;
  double upper = 1.0;
  u64 cutoff = 0;
  TailSource tail_source = TailSource::None;
  bool certified = false;  // exact rho at every included prime and a tail bound
};

// A set S of primes given by a membership rule.
struct PrimeSetFilter {
  std::string name = "none";
  std::function<bool(u64 p)> member;  // unset member means the empty set
  bool declared_thin = false;         // asserts sum_{p in S} 1/p < infinity
  // Optional certified growth floor:
  //   sum_{p in S, p <= Y} log(1 + 1/p) >= density * log log Y + c_lo
  // for all Y >= valid_from. Used to certify schedules far beyond any sieve.
  struct GrowthEnvelope {
    double density = 0.0;
    double c_lo = 0.0;
    double valid_from = 0.0;
  };
  std::optional<GrowthEnvelope> growth;

  bool contains(u64 p) const { return member && member(p); }
};

// Primes p == residue (mod modulus). For (4, 3) a growth envelope validated
// against sieve data up to 10^8 is attached (density 1/2, floor -0.10).
PrimeSetFilter residue_class_filter(u64 modulus, u64 residue);
// An explicit finite set; declared thin (a finite sum of reciprocals).
PrimeSetFilter finite_set_filter(std::vector<u64> primes);

// prod over p <= cutoff, p not in exclude, of (1 - 1/p) rho(p), with a
// certified tail enclosure when the function carries a TailEnvelope:
// |log tail| <= 2C/cutoff once C/cutoff <= 1/2 (from sum_{n > x} n^{-2} <= 1/x).
// Without an envelope the enclosure covers the partial product only and is
// uncertified; with demand_certified it degenerates to [0, +inf).
ProductEstimate r_product(const MultFn& f, u64 cutoff,
                          const PrimeSetFilter* exclude = nullptr,
                          const PrimeTable* table = nullptr,
                          bool demand_certified = false);

struct HypothesisAudit {
  std::string inequality;
  bool pass = true;
  u64 checked_primes = 0;
  u64 worst_p = 0;
  double worst_margin = 0.0;  // smallest observed slack; >= 0 when pass
};

struct ConstantReport {
  ProductEstimate constant;  // final enclosure with e^{+-gamma} folded in
  ProductEstimate product;   // the bare prime product
  std::vector<HypothesisAudit> audits;
  std::vector<std::string> assertion_flags;
};

// e^gamma * R (maximal order of f(n) per log log n), after auditing the
// hypotheses rho(p) <= (1-1/p)^{-1} and existence of e_p with
// f(p^{e_p}) >= 1 + 1/p for every included p <= cutoff. With a filter S the
// prefactor prod_{p in S, p <= cutoff} (1 - 1/p) is applied.
ConstantReport maximal_order_constant(const MultFn& f, u64 cutoff,
                                      const PrimeSetFilter* S = nullptr,
                                      const PrimeTable* table = nullptr);

// e^{-gamma} * prod_p (1-1/p)^{-1} inf_nu phi(p^nu)/p^nu (minimal order of
// phi(n) log log n / n). The p=2 factor may be 0; enclosures represent that.
ConstantReport minimal_order_constant_phi(const DivisorSystem& sys, u64 cutoff,
                                          const PrimeTable* table = nullptr);

// Exponents 2 <= a_1 < a_2 < ... with
// (1-1/p) sup_nu f(p^nu) = 1 - p^{-a_1} + p^{-a_2} - ..., extracted greedily,
// truncated at max_depth. Requires sigma-form f with exact rho.
std::vector<u32> alternating_decomposition(const MultFn& f, u64 p, u32 max_depth = 32);

}  // namespace extord
