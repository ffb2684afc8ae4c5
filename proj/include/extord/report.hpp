#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "extord/constructions.hpp"
#include "extord/divisor_system.hpp"
#include "extord/extremal.hpp"

namespace extord {

// %.17g (exact round-trip); infinities render as "inf"/"-inf" so they survive
// both CSV and JSON (where the bare IEEE values would degrade to null).
std::string format_double(double v);

inline constexpr int kSchemaVersion = 1;

std::string rho_table_csv(const std::vector<RhoEstimate>& rows);
nlohmann::json rho_table_json(const std::vector<RhoEstimate>& rows);

// One fixed shape serves champion series and empirical scans: scans put n in
// the x column and leave target/deviation empty.
struct SeriesRow {
  u64 x = 0;
  double log_n = 0;
  double ratio = 0;
  std::optional<double> target;
  std::optional<double> deviation;
};

std::string series_csv(const std::vector<SeriesRow>& rows);
nlohmann::json series_json(const std::vector<SeriesRow>& rows, const std::string& kind);

nlohmann::json constant_report_json(const ConstantReport& rep, const std::string& function,
                                    const std::string& system,
                                    const std::string& assert_convergence);

nlohmann::json counterexample_json(const CounterexampleFn& cf, double worst_margin,
                                   const ProbeReport& scan);

struct PhiRow {
  u64 p = 0;
  u32 nu = 0;
  mpz_class phi;
};

std::string phi_table_csv(const std::vector<PhiRow>& rows);
nlohmann::json phi_table_json(const std::vector<PhiRow>& rows, const std::string& system);

nlohmann::json check_report_json(const SystemWitness& w, const std::string& system, u64 bound,
                                 bool reconstruction_ok, u64 first_reconstruction_failure);

// dump(2) with a trailing newline; all doubles inside were stored via
// format_double strings or plain integers, keeping output byte-stable.
std::string render(const nlohmann::json& j);

}  // namespace extord
