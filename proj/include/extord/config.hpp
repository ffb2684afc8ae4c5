#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "extord/arith_fn.hpp"
#include "extord/divisor_system.hpp"
#include "extord/errors.hpp"
#include "extord/extremal.hpp"

namespace extord {

// Every knob is explicit here and round-trips through the flat key = value
// text format; --print-effective-config dumps all of them, defaults included.
struct RunConfig {
  // Divisor system: standard | unitary | exponential | pathological | custom.
  std::string system = "standard";
  std::vector<u32> pathological_n = {2, 4, 8, 16};
  // Custom systems overlay explicit rows "ae <p> <nu> = d0,d1,..." on top of
  // the standard rule, so the system stays total over all prime powers.
  std::map<std::pair<u64, u32>, std::vector<u32>> custom_ae;
  bool claims_multiplicative = true;

  // Function: sigma_over_id | id_over_phi | custom ("fn <p> <nu> = value"
  // rows; unspecified prime powers evaluate to 1).
  std::string function = "sigma_over_id";
  std::map<std::pair<u64, u32>, double> custom_fn;

  // Analysis.
  u64 cutoff = 1'000'000;
  u32 scan_limit = 64;
  std::vector<u64> x_grid = {10'000, 100'000, 1'000'000};
  double eps = 1e-2;
  std::string filter = "none";  // none | mod4_3 | set:p1,p2,...
  std::string assert_convergence = "unconditional";
  u64 head_bound = 0;  // 0 = choose from the function's metadata

  // Output.
  std::string out;              // empty = stdout
  std::string format = "csv";   // csv | json

  // Command-specific bounds.
  u64 bound = 10'000;        // rho table range / check range
  u64 n_max = 100'000;       // scan range
  u32 j_max = 8;             // counterexample schedule length
  u64 cx_bound = 1'000;      // counterexample S-prime enumeration bound
  u64 nu_ceiling = 1'000'000;
  u64 g_sieve_limit = 20'000'000;
  u64 sieve_ceiling = kDefaultSieveCeiling;
  std::vector<u64> phi_primes = {2, 3, 5};
  u32 phi_nu_max = 6;
  u64 phi_n = 0;  // nonzero: tabulate phi over the divisors of this n instead
};

// Applies one "key = value" line (or "ae p nu = set" / "fn p nu = x" row).
// Blank lines and '#' comments are no-ops. Unknown keys throw ConfigError.
void apply_config_line(RunConfig& cfg, const std::string& line, int lineno = 0);

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Range/consistency checks shared by every command; throws ConfigError.
void validate_config(const RunConfig& cfg);

// Full sorted dump; parse_config_text(effective_config_text(c)) == c.
std::string effective_config_text(const RunConfig& cfg);

DivisorSystem make_system(const RunConfig& cfg);
MultFn make_function(const RunConfig& cfg, const DivisorSystem& sys);
// nullopt for "none".
std::optional<PrimeSetFilter> make_filter(const RunConfig& cfg);

}  // namespace extord
