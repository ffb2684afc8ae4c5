#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

// End-to-end tests against the installed binary: exact bytes for small golden
// outputs, determinism, config precedence, and the exit-code contract.

namespace {

struct CliResult {
  int code = -1;
  std::string output;  // stdout + stderr interleaved
};

std::string temp_path(const std::string& tag) {
  static int counter = 0;
  std::ostringstream s;
  s << (std::filesystem::temp_directory_path() / "extord_test_").string() << getpid() << "_" << tag
    << "_" << counter++;
  return s.str();
}

CliResult run_cli(const std::string& args) {
  std::string out_file = temp_path("out");
  std::string cmd = std::string("\"") + EXTORD_CLI_PATH + "\" " + args + " > " + out_file +
                    " 2>&1";
  int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(out_file, std::ios::binary);
  std::ostringstream buf;
  buf << f.rdbuf();
  r.output = buf.str();
  std::remove(out_file.c_str());
  return r;
}

std::string write_config(const std::string& body) {
  std::string path = temp_path("cfg");
  std::ofstream f(path);
  f << body;
  return path;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("rho table bytes are exact for a small range") {
  auto r = run_cli("rho --system unitary --bound 10 --format csv");
  CHECK(r.code == 0);
  CHECK(r.output ==
        "p,rho,attained_at,status\n"
        "2,1.5,1,exact\n"
        "3,1.3333333333333333,1,exact\n"
        "5,1.2,1,exact\n"
        "7,1.1428571428571428,1,exact\n");

  auto empty = run_cli("rho --bound 1 --format csv");
  CHECK(empty.code == 0);
  CHECK(empty.output == "p,rho,attained_at,status\n");
}

TEST_CASE("output is deterministic across runs") {
  auto a = run_cli("champion --x-grid 10000,100000 --format csv");
  auto b = run_cli("champion --x-grid 10000,100000 --format csv");
  CHECK(a.code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.rfind("x,log_n,ratio,target,deviation\n", 0) == 0);
  CHECK(count_lines(a.output) == 3);

  auto c = run_cli("constant --system unitary --cutoff 100000 --format json");
  auto d = run_cli("constant --system unitary --cutoff 100000 --format json");
  CHECK(c.code == 0);
  CHECK(c.output == d.output);
}

TEST_CASE("print-effective-config dumps every knob") {
  auto r = run_cli("rho --print-effective-config");
  CHECK(r.code == 0);
  CHECK(r.output.find("system = standard\n") != std::string::npos);
  CHECK(r.output.find("eps = 0.01\n") != std::string::npos);
  CHECK(r.output.find("cutoff = 1000000\n") != std::string::npos);

  auto r2 = run_cli("rho --system unitary --print-effective-config");
  CHECK(r2.code == 0);
  CHECK(r2.output.find("system = unitary\n") != std::string::npos);
}

TEST_CASE("config files load and flags take precedence") {
  std::string cfg = write_config("system = unitary\nbound = 10\n");
  auto r = run_cli("rho --config " + cfg + " --format csv");
  CHECK(r.code == 0);
  CHECK(r.output.find("2,1.5,1,exact\n") != std::string::npos);
  CHECK(count_lines(r.output) == 5);  // header + 2,3,5,7

  auto r2 = run_cli("rho --config " + cfg + " --bound 5 --format csv");
  CHECK(r2.code == 0);
  CHECK(count_lines(r2.output) == 4);  // header + 2,3,5
  CHECK(r2.output.find("5,1.2,1,exact\n") != std::string::npos);
  CHECK(r2.output.find("7,") == std::string::npos);
  std::remove(cfg.c_str());
}

TEST_CASE("exit codes follow the documented contract") {
  CHECK(run_cli("totally-bogus").code == 2);
  CHECK(run_cli("rho --system klein").code == 2);
  CHECK(run_cli("counterexample").code == 2);  // needs a filter
  CHECK(run_cli("constant --function id_over_phi --filter mod4_3").code == 2);
  CHECK(run_cli("counterexample --filter set:3,7 --j-max 2").code == 2);  // thin set

  std::string bad_fn = write_config("function = custom\nfn 2 1 = 9\ncutoff = 1000\n");
  CHECK(run_cli("constant --config " + bad_fn).code == 1);  // rho(2) = 9 > 2
  std::remove(bad_fn.c_str());

  std::string too_big = write_config(
      "sieve_ceiling = 100000\ncutoff = 50000\nx_grid = 10000\nbound = 200000\n");
  CHECK(run_cli("rho --config " + too_big).code == 3);
  std::remove(too_big.c_str());

  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("check --system unitary --bound 2000").code == 0);
}

TEST_CASE("phi tables in both formats") {
  auto r = run_cli("phi --system exponential --format csv");
  CHECK(r.code == 0);
  CHECK(r.output.rfind("p,nu,phi\n", 0) == 0);
  CHECK(r.output.find("\n2,6,54\n") != std::string::npos);

  std::string cfg = write_config("phi_n = 12\nsystem = unitary\nformat = json\n");
  auto r2 = run_cli("phi --config " + cfg);
  CHECK(r2.code == 0);
  CHECK(r2.output.find("\"phi_of_n\"") != std::string::npos);
  auto j = nlohmann::json::parse(r2.output);
  CHECK(j["n"] == "12");
  std::remove(cfg.c_str());
}

TEST_CASE("record scan finds the three champions") {
  auto r = run_cli("scan --n-max 100000 --format csv");
  CHECK(r.code == 0);
  CHECK(count_lines(r.output) == 4);  // header + records at 16, 18, 24
  CHECK(r.output.find("\n16,") != std::string::npos);
  CHECK(r.output.find("\n18,") != std::string::npos);
  CHECK(r.output.find("\n24,") != std::string::npos);
}

TEST_CASE("counterexample report round-trips as json") {
  auto r = run_cli("counterexample --filter mod4_3 --j-max 4 --x-grid 100,1000 --format json");
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j["kind"] == "counterexample");
  REQUIRE(j["schedule"].size() == 4);
  CHECK(j["schedule"][0]["p"] == 3);
  CHECK(j["schedule"][0]["nu"] == 1);
  double margin = std::strtod(j["worst_margin"].get<std::string>().c_str(), nullptr);
  CHECK(margin >= 0.0);
  REQUIRE(j["scan"]["entries"].size() == 2);
  CHECK(j["scan"]["entries"][0]["factorial_bound_ok"] == true);
}

TEST_CASE("phi champions approach the minimal-order constant") {
  auto r = run_cli("champion --function id_over_phi --x-grid 10000,100000 --format csv");
  CHECK(r.code == 0);
  std::istringstream in(r.output);
  std::string header, line;
  std::getline(in, header);
  REQUIRE(std::getline(in, line));
  unsigned long long x = 0;
  double log_n = 0, ratio = 0;
  REQUIRE(std::sscanf(line.c_str(), "%llu,%lf,%lf", &x, &log_n, &ratio) == 3);
  CHECK(x == 10000);
  CHECK(ratio > 0.55);
  CHECK(ratio < 0.57);
}
