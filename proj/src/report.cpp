#include "extord/report.hpp"

#include <cmath>
#include <cstdio>

namespace extord {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string rho_table_csv(const std::vector<RhoEstimate>& rows) {
  std::string out = "p,rho,attained_at,status\n";
  for (const auto& r : rows) {
    out += std::to_string(r.p) + "," + format_double(r.value) + ",";
    if (r.attained_at) out += std::to_string(*r.attained_at);
    out += ",";
    out += (r.status == RhoStatus::Exact ? "exact" : "scan_bounded");
    out += "\n";
  }
  return out;
}

json rho_table_json(const std::vector<RhoEstimate>& rows) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "rho";
  j["rows"] = json::array();
  for (const auto& r : rows) {
    json row;
    row["p"] = r.p;
    row["rho"] = format_double(r.value);
    if (r.attained_at)
      row["attained_at"] = *r.attained_at;
    else
      row["attained_at"] = nullptr;
    row["status"] = (r.status == RhoStatus::Exact ? "exact" : "scan_bounded");
    j["rows"].push_back(row);
  }
  return j;
}

std::string series_csv(const std::vector<SeriesRow>& rows) {
  std::string out = "x,log_n,ratio,target,deviation\n";
  for (const auto& r : rows) {
    out += std::to_string(r.x) + "," + format_double(r.log_n) + "," + format_double(r.ratio) + ",";
    if (r.target) out += format_double(*r.target);
    out += ",";
    if (r.deviation) out += format_double(*r.deviation);
    out += "\n";
  }
  return out;
}

json series_json(const std::vector<SeriesRow>& rows, const std::string& kind) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  j["rows"] = json::array();
  for (const auto& r : rows) {
    json row;
    row["x"] = r.x;
    row["log_n"] = format_double(r.log_n);
    row["ratio"] = format_double(r.ratio);
    row["target"] = r.target ? json(format_double(*r.target)) : json(nullptr);
    row["deviation"] = r.deviation ? json(format_double(*r.deviation)) : json(nullptr);
    j["rows"].push_back(row);
  }
  return j;
}

namespace {

json product_json(const ProductEstimate& p) {
  json j;
  j["lower"] = format_double(p.lower);
  j["upper"] = format_double(p.upper);
  j["cutoff"] = p.cutoff;
  j["tail_source"] = to_string(p.tail_source);
  j["certified"] = p.certified;
  return j;
}

}  // namespace

json constant_report_json(const ConstantReport& rep, const std::string& function,
                          const std::string& system, const std::string& assert_convergence) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "constant";
  j["function"] = function;
  j["system"] = system;
  j["constant_lower"] = format_double(rep.constant.lower);
  j["constant_upper"] = format_double(rep.constant.upper);
  j["cutoff"] = rep.product.cutoff;
  j["constant"] = product_json(rep.constant);
  j["product"] = product_json(rep.product);
  j["hypothesis_audit"] = json::array();
  for (const auto& a : rep.audits) {
    json row;
    row["inequality"] = a.inequality;
    row["pass"] = a.pass;
    row["checked_primes"] = a.checked_primes;
    row["worst_p"] = a.worst_p;
    row["worst_margin"] = format_double(a.worst_margin);
    j["hypothesis_audit"].push_back(row);
  }
  j["assertion_flags"] = rep.assertion_flags;
  j["assert_convergence"] = assert_convergence;
  return j;
}

json counterexample_json(const CounterexampleFn& cf, double worst_margin,
                         const ProbeReport& scan) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "counterexample";
  j["filter"] = cf.S.name;
  j["schedule"] = json::array();
  for (const auto& e : cf.schedule) {
    json row;
    row["j"] = e.j;
    row["p"] = e.p;
    row["nu"] = e.nu;  // 0 = not materializable in 64 bits
    row["log_nu"] = format_double(e.log_nu);
    row["log_log_q"] = format_double(e.log_log_q);
    row["log_q"] = format_double(e.log_q);
    row["sieve_certified"] = e.sieve_certified;
    row["g_log_lower"] = format_double(e.g_log_lower);
    row["target_log"] = format_double(e.j * std::log(static_cast<double>(e.j)));
    j["schedule"].push_back(row);
  }
  j["worst_margin"] = format_double(worst_margin);
  j["scan"] = json::object();
  j["scan"]["entries"] = json::array();
  for (const auto& e : scan.entries) {
    json row;
    row["log_n"] = format_double(e.log_n);
    row["log_f"] = format_double(e.log_f);
    row["ratio"] = format_double(e.ratio);
    row["k"] = e.k;
    row["f_n1"] = format_double(e.f_n1);
    row["k_factorial"] = format_double(e.k_factorial);
    row["factorial_bound_ok"] = e.factorial_bound_ok;
    j["scan"]["entries"].push_back(row);
  }
  j["scan"]["running_max"] = json::array();
  for (double v : scan.running_max) j["scan"]["running_max"].push_back(format_double(v));
  return j;
}

std::string phi_table_csv(const std::vector<PhiRow>& rows) {
  std::string out = "p,nu,phi\n";
  for (const auto& r : rows)
    out += std::to_string(r.p) + "," + std::to_string(r.nu) + "," + r.phi.get_str() + "\n";
  return out;
}

json phi_table_json(const std::vector<PhiRow>& rows, const std::string& system) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "phi";
  j["system"] = system;
  j["rows"] = json::array();
  for (const auto& r : rows) {
    json row;
    row["p"] = r.p;
    row["nu"] = r.nu;
    row["phi"] = r.phi.get_str();
    j["rows"].push_back(row);
  }
  return j;
}

json check_report_json(const SystemWitness& w, const std::string& system, u64 bound,
                       bool reconstruction_ok, u64 first_reconstruction_failure) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "check";
  j["system"] = system;
  j["bound"] = bound;
  j["consistent"] = w.consistent;
  if (!w.consistent) {
    j["n1"] = w.n1;
    j["n2"] = w.n2;
    j["offending_divisor"] = w.offending_divisor;
    j["detail"] = w.detail;
  }
  j["reconstruction_ok"] = reconstruction_ok;
  if (!reconstruction_ok) j["first_reconstruction_failure"] = first_reconstruction_failure;
  return j;
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

}  // namespace extord
