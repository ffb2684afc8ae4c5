#include "extord/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace extord {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

[[noreturn]] void bad(const std::string& what, int lineno) {
  std::string where = lineno > 0 ? " (line " + std::to_string(lineno) + ")" : "";
  throw ConfigError(what + where);
}

u64 parse_u64(const std::string& s, int lineno) {
  try {
    std::size_t pos = 0;
    u64 v = std::stoull(s, &pos);
    if (pos != s.size()) bad("trailing junk in integer '" + s + "'", lineno);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad("not an integer: '" + s + "'", lineno);
  }
}

double parse_double(const std::string& s, int lineno) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) bad("trailing junk in number '" + s + "'", lineno);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad("not a number: '" + s + "'", lineno);
  }
}

bool parse_bool(const std::string& s, int lineno) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  bad("not a boolean: '" + s + "'", lineno);
}

template <typename T>
std::vector<T> parse_list_u(const std::string& s, int lineno) {
  std::vector<T> out;
  if (trim(s).empty()) return out;
  for (const auto& tok : split(s, ',')) {
    u64 v = parse_u64(tok, lineno);
    if (v > std::numeric_limits<T>::max()) bad("value out of range: " + tok, lineno);
    out.push_back(static_cast<T>(v));
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

void apply_config_line(RunConfig& cfg, const std::string& raw, int lineno) {
  std::string line = raw;
  if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
  line = trim(line);
  if (line.empty()) return;
  auto eq = line.find('=');
  if (eq == std::string::npos) bad("expected key = value, got '" + line + "'", lineno);
  std::string key = trim(line.substr(0, eq));
  std::string val = trim(line.substr(eq + 1));
  if (key.empty()) bad("empty key", lineno);

  // Table rows: "ae <p> <nu> = d0,d1,..." and "fn <p> <nu> = value".
  std::istringstream ks(key);
  std::string head;
  ks >> head;
  if (head == "ae" || head == "fn") {
    std::string ps, ns, extra;
    ks >> ps >> ns;
    if (ps.empty() || ns.empty() || (ks >> extra))
      bad("table row key must be '" + head + " <p> <nu>'", lineno);
    u64 p = parse_u64(ps, lineno);
    u64 nu = parse_u64(ns, lineno);
    if (!is_prime(p)) bad("table row prime " + ps + " is not prime", lineno);
    if (nu > 100000) bad("table row exponent too large: " + ns, lineno);
    if (head == "ae") {
      auto set = parse_list_u<u32>(val, lineno);
      if (set.empty()) bad("admissible set must be nonempty", lineno);
      cfg.custom_ae[{p, static_cast<u32>(nu)}] = std::move(set);
    } else {
      double v = parse_double(val, lineno);
      if (!(v >= 0.0)) bad("function values must be nonnegative", lineno);
      cfg.custom_fn[{p, static_cast<u32>(nu)}] = v;
    }
    return;
  }

  if (key == "system") cfg.system = val;
  else if (key == "pathological_n") cfg.pathological_n = parse_list_u<u32>(val, lineno);
  else if (key == "claims_multiplicative") cfg.claims_multiplicative = parse_bool(val, lineno);
  else if (key == "function") cfg.function = val;
  else if (key == "cutoff") cfg.cutoff = parse_u64(val, lineno);
  else if (key == "scan_limit") {
    u64 v = parse_u64(val, lineno);
    if (v < 1 || v > 512) bad("scan_limit must lie in [1, 512]", lineno);
    cfg.scan_limit = static_cast<u32>(v);
  }
  else if (key == "x_grid") cfg.x_grid = parse_list_u<u64>(val, lineno);
  else if (key == "eps") cfg.eps = parse_double(val, lineno);
  else if (key == "filter") cfg.filter = val;
  else if (key == "assert_convergence") cfg.assert_convergence = val;
  else if (key == "head_bound") cfg.head_bound = parse_u64(val, lineno);
  else if (key == "out") cfg.out = val;
  else if (key == "format") cfg.format = val;
  else if (key == "bound") cfg.bound = parse_u64(val, lineno);
  else if (key == "n_max") cfg.n_max = parse_u64(val, lineno);
  else if (key == "j_max") {
    u64 v = parse_u64(val, lineno);
    if (v < 1 || v > 64) bad("j_max must lie in [1, 64]", lineno);
    cfg.j_max = static_cast<u32>(v);
  }
  else if (key == "cx_bound") cfg.cx_bound = parse_u64(val, lineno);
  else if (key == "nu_ceiling") cfg.nu_ceiling = parse_u64(val, lineno);
  else if (key == "g_sieve_limit") cfg.g_sieve_limit = parse_u64(val, lineno);
  else if (key == "sieve_ceiling") cfg.sieve_ceiling = parse_u64(val, lineno);
  else if (key == "phi_primes") cfg.phi_primes = parse_list_u<u64>(val, lineno);
  else if (key == "phi_nu_max") {
    u64 v = parse_u64(val, lineno);
    if (v < 1 || v > 100000) bad("phi_nu_max must lie in [1, 100000]", lineno);
    cfg.phi_nu_max = static_cast<u32>(v);
  }
  else if (key == "phi_n") cfg.phi_n = parse_u64(val, lineno);
  else bad("unknown key '" + key + "'", lineno);
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) apply_config_line(cfg, line, ++lineno);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void validate_config(const RunConfig& cfg) {
  auto one_of = [](const std::string& v, std::initializer_list<const char*> opts) {
    return std::any_of(opts.begin(), opts.end(), [&](const char* o) { return v == o; });
  };
  if (!one_of(cfg.system, {"standard", "unitary", "exponential", "pathological", "custom"}))
    throw ConfigError("system must be standard|unitary|exponential|pathological|custom, got '" +
                      cfg.system + "'");
  if (!one_of(cfg.function, {"sigma_over_id", "id_over_phi", "custom"}))
    throw ConfigError("function must be sigma_over_id|id_over_phi|custom, got '" + cfg.function +
                      "'");
  if (!one_of(cfg.format, {"csv", "json"}))
    throw ConfigError("format must be csv|json, got '" + cfg.format + "'");
  if (!one_of(cfg.assert_convergence, {"unconditional", "asserted"}))
    throw ConfigError("assert_convergence must be unconditional|asserted");
  if (cfg.filter != "none" && cfg.filter != "mod4_3" && cfg.filter.rfind("set:", 0) != 0)
    throw ConfigError("filter must be none|mod4_3|set:p1,p2,..., got '" + cfg.filter + "'");
  if (cfg.system == "pathological") {
    if (cfg.pathological_n.empty())
      throw ConfigError("pathological system needs a nonempty pathological_n");
    for (std::size_t i = 0; i < cfg.pathological_n.size(); ++i) {
      if (cfg.pathological_n[i] == 0 ||
          (i > 0 && cfg.pathological_n[i - 1] >= cfg.pathological_n[i]))
        throw ConfigError("pathological_n must be strictly increasing positive integers");
    }
  }
  if (cfg.cutoff < 10) throw ConfigError("cutoff must be >= 10");
  if (cfg.cutoff > cfg.sieve_ceiling)
    throw ConfigError("cutoff exceeds sieve_ceiling " + std::to_string(cfg.sieve_ceiling));
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw ConfigError("eps must lie in (0,1)");
  if (cfg.x_grid.empty()) throw ConfigError("x_grid must be nonempty");
  for (std::size_t i = 0; i < cfg.x_grid.size(); ++i) {
    if (cfg.x_grid[i] < 10) throw ConfigError("x_grid entries must be >= 10");
    if (i > 0 && cfg.x_grid[i - 1] >= cfg.x_grid[i])
      throw ConfigError("x_grid must be strictly increasing");
  }
  if (cfg.x_grid.back() > cfg.sieve_ceiling)
    throw ConfigError("x_grid exceeds sieve_ceiling");
  if (cfg.bound < 1) throw ConfigError("bound must be >= 1");
  if (cfg.n_max < 16 || cfg.n_max > 10'000'000)
    throw ConfigError("n_max must lie in [16, 10^7]");
  if (cfg.phi_primes.empty() && cfg.phi_n == 0)
    throw ConfigError("phi command needs phi_primes or phi_n");
  for (u64 p : cfg.phi_primes)
    if (!is_prime(p)) throw ConfigError("phi_primes entry " + std::to_string(p) + " is not prime");
}

std::string effective_config_text(const RunConfig& cfg) {
  std::vector<std::string> lines = {
      "assert_convergence = " + cfg.assert_convergence,
      "bound = " + std::to_string(cfg.bound),
      "claims_multiplicative = " + std::string(cfg.claims_multiplicative ? "true" : "false"),
      "cutoff = " + std::to_string(cfg.cutoff),
      "cx_bound = " + std::to_string(cfg.cx_bound),
      "eps = " + fmt_double(cfg.eps),
      "filter = " + cfg.filter,
      "format = " + cfg.format,
      "function = " + cfg.function,
      "g_sieve_limit = " + std::to_string(cfg.g_sieve_limit),
      "head_bound = " + std::to_string(cfg.head_bound),
      "j_max = " + std::to_string(cfg.j_max),
      "n_max = " + std::to_string(cfg.n_max),
      "nu_ceiling = " + std::to_string(cfg.nu_ceiling),
      "out = " + cfg.out,
      "pathological_n = " + join(cfg.pathological_n),
      "phi_n = " + std::to_string(cfg.phi_n),
      "phi_nu_max = " + std::to_string(cfg.phi_nu_max),
      "phi_primes = " + join(cfg.phi_primes),
      "scan_limit = " + std::to_string(cfg.scan_limit),
      "sieve_ceiling = " + std::to_string(cfg.sieve_ceiling),
      "system = " + cfg.system,
      "x_grid = " + join(cfg.x_grid),
  };
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  for (const auto& [key, set] : cfg.custom_ae) {
    std::string row = "ae " + std::to_string(key.first) + " " + std::to_string(key.second) + " = ";
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (i) row += ",";
      row += std::to_string(set[i]);
    }
    out += row + "\n";
  }
  for (const auto& [key, v] : cfg.custom_fn)
    out += "fn " + std::to_string(key.first) + " " + std::to_string(key.second) + " = " +
           fmt_double(v) + "\n";
  return out;
}

DivisorSystem make_system(const RunConfig& cfg) {
  if (cfg.system == "standard" || cfg.system == "unitary" || cfg.system == "exponential")
    return builtin_system(cfg.system);
  if (cfg.system == "pathological")
    return pathological_two_power_system(cfg.pathological_n);
  if (cfg.system == "custom") {
    DivisorSystem base = builtin_system("standard");
    DivisorSystem sys;
    sys.name = "custom";
    sys.claims_multiplicative = cfg.claims_multiplicative;
    auto table = cfg.custom_ae;  // by value into the closure
    sys.admissible = [table, base](u64 p, u32 nu) -> std::vector<u32> {
      auto it = table.find({p, nu});
      if (it != table.end()) return it->second;
      return base.admissible(p, nu);
    };
    // A custom table voids the builtin closed forms; no inf hint is attached,
    // so minimal-order runs fall back to scanned (uncertified) local factors.
    return sys;
  }
  throw ConfigError("unknown system '" + cfg.system + "'");
}

MultFn make_function(const RunConfig& cfg, const DivisorSystem& sys) {
  if (cfg.function == "sigma_over_id") return sigma_over_id_fn(sys);
  if (cfg.function == "id_over_phi") return id_over_phi_fn(sys);
  if (cfg.function == "custom") {
    MultFn f;
    f.name = "custom";
    auto table = cfg.custom_fn;
    f.value_at = [table](u64 p, u32 nu) -> double {
      if (nu == 0) return 1.0;
      auto it = table.find({p, nu});
      return it != table.end() ? it->second : 1.0;
    };
    return f;
  }
  throw ConfigError("unknown function '" + cfg.function + "'");
}

std::optional<PrimeSetFilter> make_filter(const RunConfig& cfg) {
  if (cfg.filter == "none") return std::nullopt;
  if (cfg.filter == "mod4_3") return residue_class_filter(4, 3);
  if (cfg.filter.rfind("set:", 0) == 0) {
    std::vector<u64> ps;
    for (const auto& tok : split(cfg.filter.substr(4), ','))
      ps.push_back(parse_u64(tok, 0));
    return finite_set_filter(std::move(ps));
  }
  throw ConfigError("unknown filter '" + cfg.filter + "'");
}

}  // namespace extord
