#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "extord/config.hpp"
#include "extord/constructions.hpp"
#include "extord/report.hpp"

namespace {

using namespace extord;

void emit(const RunConfig& cfg, const std::string& payload) {
  if (cfg.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + cfg.out);
  f << payload;
}

int cmd_rho(const RunConfig& cfg) {
  DivisorSystem sys = make_system(cfg);
  MultFn f = make_function(cfg, sys);
  PrimeTable table(cfg.bound, cfg.sieve_ceiling);
  std::vector<RhoEstimate> rows;
  for (u64 p : table.primes()) rows.push_back(rho(f, p, cfg.scan_limit));
  emit(cfg, cfg.format == "json" ? render(rho_table_json(rows)) : rho_table_csv(rows));
  return 0;
}

// Always a JSON document: enclosures plus audits do not flatten into CSV.
int cmd_constant(const RunConfig& cfg) {
  DivisorSystem sys = make_system(cfg);
  auto filter = make_filter(cfg);
  ConstantReport rep;
  if (cfg.function == "id_over_phi") {
    if (filter)
      throw ConfigError("the minimal-order constant does not take a filter; drop 'filter'");
    rep = minimal_order_constant_phi(sys, cfg.cutoff);
  } else {
    MultFn f = make_function(cfg, sys);
    rep = maximal_order_constant(f, cfg.cutoff, filter ? &*filter : nullptr);
  }
  emit(cfg, render(constant_report_json(rep, cfg.function, cfg.system, cfg.assert_convergence)));
  for (const auto& a : rep.audits)
    if (!a.pass) return 1;
  return 0;
}

int cmd_champion(const RunConfig& cfg) {
  DivisorSystem sys = make_system(cfg);
  std::vector<SeriesRow> rows;
  if (cfg.function == "id_over_phi") {
    PrimeTable table(cfg.x_grid.back(), cfg.sieve_ceiling);
    std::optional<double> target;
    ConstantReport rep =
        minimal_order_constant_phi(sys, std::min(cfg.cutoff, cfg.x_grid.back()), &table);
    if (rep.constant.certified) target = 0.5 * (rep.constant.lower + rep.constant.upper);
    for (u64 x : cfg.x_grid) {
      ChampionPoint pt = build_phi_champion(sys, x, &table);
      rows.push_back({pt.x, pt.log_n, pt.ratio, target,
                      target ? std::optional<double>(std::abs(pt.ratio - *target))
                             : std::nullopt});
    }
  } else {
    MultFn f = make_function(cfg, sys);
    if (cfg.head_bound > 0) {
      PrimeTable table(cfg.x_grid.back(), cfg.sieve_ceiling);
      for (u64 x : cfg.x_grid) {
        auto sched = default_schedule(f, x, cfg.head_bound);
        auto res = build_champion(f, x, cfg.head_bound, cfg.eps, sched, &table);
        rows.push_back({res.point.x, res.point.log_n, res.point.ratio, std::nullopt, std::nullopt});
      }
    } else {
      ChampionSeries s = champion_series(f, cfg.x_grid, cfg.eps);
      for (std::size_t i = 0; i < s.points.size(); ++i)
        rows.push_back({s.points[i].x, s.points[i].log_n, s.points[i].ratio, s.target,
                        s.target ? std::optional<double>(s.deviations[i]) : std::nullopt});
    }
  }
  emit(cfg, cfg.format == "json" ? render(series_json(rows, "champion")) : series_csv(rows));
  return 0;
}

int cmd_scan(const RunConfig& cfg) {
  DivisorSystem sys = make_system(cfg);
  MultFn f = make_function(cfg, sys);
  std::vector<SeriesRow> rows;
  for (const auto& rec : empirical_scan(f, cfg.n_max))
    rows.push_back({rec.n, std::log(static_cast<double>(rec.n)), rec.ratio, std::nullopt,
                    std::nullopt});
  emit(cfg, cfg.format == "json" ? render(series_json(rows, "scan")) : series_csv(rows));
  return 0;
}

int cmd_counterexample(const RunConfig& cfg) {
  auto filter = make_filter(cfg);
  if (!filter)
    throw ConfigError("counterexamples need a fat prime-set filter, e.g. filter = mod4_3");
  CounterexampleOptions opts;
  opts.nu_ceiling = cfg.nu_ceiling;
  opts.g_sieve_limit = cfg.g_sieve_limit;
  opts.sieve_ceiling = cfg.sieve_ceiling;
  CounterexampleFn cf = build_counterexample(*filter, cfg.j_max, cfg.cx_bound, opts);
  double margin = verify_counterexample_schedule(cf);

  // Probes at heights log n = x for each grid x; filler primes live outside S,
  // which for density-1/2 sets halves the usable log mass per sieve range.
  u64 table_limit = std::min<u64>(
      cfg.sieve_ceiling,
      std::max<u64>(1000, static_cast<u64>(2.6 * static_cast<double>(cfg.x_grid.back()))));
  PrimeTable table(table_limit, cfg.sieve_ceiling);
  std::vector<Factored> probes;
  for (u64 x : cfg.x_grid)
    probes.push_back(make_probe(cf, table, static_cast<double>(x), 4));
  ProbeReport scan = counterexample_scan(cf, probes);
  emit(cfg, render(counterexample_json(cf, margin, scan)));
  if (margin < 0) return 1;
  for (const auto& e : scan.entries)
    if (!e.factorial_bound_ok) return 1;
  return 0;
}

int cmd_phi(const RunConfig& cfg) {
  DivisorSystem sys = make_system(cfg);
  std::vector<PhiRow> rows;
  PhiTable cache(sys);
  if (cfg.phi_n > 0) {
    Factored n = factorize(cfg.phi_n);
    for (const auto& pf : n.factors())
      for (u32 nu = 1; nu <= pf.nu; ++nu) rows.push_back({pf.p, nu, cache.value(pf.p, nu)});
    if (cfg.format == "json") {
      nlohmann::json j = phi_table_json(rows, cfg.system);
      j["n"] = std::to_string(cfg.phi_n);
      j["phi_of_n"] = phi_a(sys, n, cache).get_str();
      emit(cfg, render(j));
      return 0;
    }
  } else {
    for (u64 p : cfg.phi_primes)
      for (u32 nu = 1; nu <= cfg.phi_nu_max; ++nu) rows.push_back({p, nu, cache.value(p, nu)});
  }
  emit(cfg, cfg.format == "json" ? render(phi_table_json(rows, cfg.system))
                                 : phi_table_csv(rows));
  return 0;
}

int cmd_check(const RunConfig& cfg) {
  DivisorSystem sys = make_system(cfg);
  SystemWitness w = check_multiplicative(sys, cfg.bound);
  bool rec_ok = true;
  u64 first_fail = 0;
  std::string rec_detail;
  if (w.consistent) {
    try {
      PhiTable cache(sys);
      for (u64 n = 1; n <= cfg.bound; ++n) {
        Factored fn = factorize(n);
        mpz_class sum = 0;
        for (const Factored& d : a_divisors(sys, fn)) sum += phi_a(sys, d, cache);
        if (sum != n) {
          rec_ok = false;
          first_fail = n;
          break;
        }
      }
    } catch (const UnsolvableError& e) {
      rec_ok = false;
      rec_detail = e.what();
    }
  }
  nlohmann::json j = check_report_json(w, cfg.system, cfg.bound, rec_ok, first_fail);
  if (!rec_detail.empty()) j["reconstruction_detail"] = rec_detail;
  emit(cfg, render(j));
  return (w.consistent && rec_ok) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extremal orders of multiplicative arithmetic functions over divisor systems"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  bool print_cfg = false;
  std::optional<std::string> o_system, o_function, o_filter, o_out, o_format, o_xgrid;
  std::optional<u64> o_cutoff, o_bound, o_nmax, o_jmax;
  std::optional<double> o_eps;

  app.add_option("--config", config_path, "config file (flat key = value lines)");
  app.add_option("--system", o_system, "standard|unitary|exponential|pathological|custom");
  app.add_option("--function", o_function, "sigma_over_id|id_over_phi|custom");
  app.add_option("--cutoff", o_cutoff, "prime product cutoff");
  app.add_option("--x-grid", o_xgrid, "comma-separated increasing integers");
  app.add_option("--filter", o_filter, "none|mod4_3|set:p1,p2,...");
  app.add_option("--eps", o_eps, "champion inequality slack, in (0,1)");
  app.add_option("--bound", o_bound, "prime/identity check bound");
  app.add_option("--n-max", o_nmax, "scan upper limit");
  app.add_option("--j-max", o_jmax, "counterexample schedule length");
  app.add_option("--out", o_out, "output path (default stdout)");
  app.add_option("--format", o_format, "csv|json");
  app.add_flag("--print-effective-config", print_cfg,
               "print the full resolved config and exit");

  auto* sc_rho = app.add_subcommand("rho", "per-prime sup table of f(p^nu)");
  auto* sc_constant = app.add_subcommand("constant", "certified extremal-order constant");
  auto* sc_champion = app.add_subcommand("champion", "champion sequence along an x grid");
  auto* sc_scan = app.add_subcommand("scan", "brute-force record scan of f(n)/log log n");
  auto* sc_counterexample =
      app.add_subcommand("counterexample", "schedule forcing rho = inf with bounded ratios");
  auto* sc_phi = app.add_subcommand("phi", "exact generalized-totient table");
  auto* sc_check = app.add_subcommand("check", "multiplicativity + reconstruction audit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path);
    if (o_system) apply_config_line(cfg, "system = " + *o_system);
    if (o_function) apply_config_line(cfg, "function = " + *o_function);
    if (o_filter) apply_config_line(cfg, "filter = " + *o_filter);
    if (o_out) apply_config_line(cfg, "out = " + *o_out);
    if (o_format) apply_config_line(cfg, "format = " + *o_format);
    if (o_xgrid) apply_config_line(cfg, "x_grid = " + *o_xgrid);
    if (o_cutoff) apply_config_line(cfg, "cutoff = " + std::to_string(*o_cutoff));
    if (o_bound) apply_config_line(cfg, "bound = " + std::to_string(*o_bound));
    if (o_nmax) apply_config_line(cfg, "n_max = " + std::to_string(*o_nmax));
    if (o_jmax) apply_config_line(cfg, "j_max = " + std::to_string(*o_jmax));
    if (o_eps) apply_config_line(cfg, "eps = " + format_double(*o_eps));
    validate_config(cfg);

    if (print_cfg) {
      std::cout << effective_config_text(cfg);
      return 0;
    }

    if (sc_rho->parsed()) return cmd_rho(cfg);
    if (sc_constant->parsed()) return cmd_constant(cfg);
    if (sc_champion->parsed()) return cmd_champion(cfg);
    if (sc_scan->parsed()) return cmd_scan(cfg);
    if (sc_counterexample->parsed()) return cmd_counterexample(cfg);
    if (sc_phi->parsed()) return cmd_phi(cfg);
    if (sc_check->parsed()) return cmd_check(cfg);
    std::cerr << "no command selected\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const MalformedSystemError& e) {
    std::cerr << "malformed system: " << e.what() << "\n";
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis violated: " << e.what() << "\n";
    return 1;
  } catch (const UnsolvableError& e) {
    std::cerr << "unsolvable: " << e.what() << "\n";
    return 1;
  } catch (const InfiniteLocalFactorError& e) {
    std::cerr << "infinite local factor: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
