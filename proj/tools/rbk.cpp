// Command-line front end: simulate, verify, converge, ssa, bench.
// Exit codes: 0 success (and all checks passed), 1 a diagnostic or invariant
// failed (report still written), 2 configuration error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "rbk/config.hpp"
#include "rbk/diagnostics.hpp"
#include "rbk/errors.hpp"
#include "rbk/harness.hpp"
#include "rbk/integrate.hpp"
#include "rbk/series_io.hpp"
#include "rbk/ssa.hpp"
#include "rbk/version.hpp"

namespace {

using namespace rbk;

std::string now_string() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", std::gmtime(&t));
  return buf;
}

struct RecordFields {
  std::uint64_t digest = 0;
  std::string started, finished;
  std::string series_path, report_path;
  int exit_status = 0;
};

void write_record(const std::filesystem::path& path, const RecordFields& rec) {
  std::ofstream out(path);
  out << "digest = " << std::hex << rec.digest << std::dec << "\n"
      << "version = " << kVersion << "\n"
      << "started = " << rec.started << "\n"
      << "finished = " << rec.finished << "\n"
      << "series = " << rec.series_path << "\n"
      << "report = " << rec.report_path << "\n"
      << "exit = " << rec.exit_status << "\n";
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::istringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(static_cast<std::size_t>(std::stoull(tok)));
  }
  return out;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path, bool full) {
  RunConfig cfg = load_config(config_path);
  RecordFields rec;
  rec.digest = cfg.digest;
  rec.started = now_string();

  InitResult init = init_state(cfg.init, cfg.n);
  TimeSeries ts = integrate(init, cfg.kernel, cfg.integrator, cfg.rhs_path);
  ts.config_digest = cfg.digest;
  ts.seed = cfg.seed;
  if (ts.hypothesis_unclassified)
    std::cerr << "warning: kernel hypothesis class unclassified; decay bounds not certified\n";

  write_series(ts, out_path, full ? SeriesMode::Full : SeriesMode::Moments);
  rec.finished = now_string();
  rec.series_path = out_path;
  write_record(out_path + ".record", rec);

  std::cout << "simulate: n=" << cfg.n << " t_end=" << cfg.integrator.t_end
            << " accepted=" << ts.stats.accepted << " rejected=" << ts.stats.rejected
            << " clamped_mass=" << ts.clamped_mass.back() << " discarded_tail="
            << ts.discarded_number << " digest=" << std::hex << cfg.digest << std::dec << "\n";
  return 0;
}

int cmd_verify(const std::string& config_path, const std::string& out_path,
               const std::string& series_path) {
  RunConfig cfg = load_config(config_path);
  RecordFields rec;
  rec.digest = cfg.digest;
  rec.started = now_string();

  TimeSeries ts;
  if (series_path.empty()) {
    InitResult init = init_state(cfg.init, cfg.n);
    ts = integrate(init, cfg.kernel, cfg.integrator, cfg.rhs_path);
  } else {
    // Re-check a stored series; structural checks report "not evaluated".
    ts = series_from_moments(read_moments_csv(series_path), cfg.n);
  }
  ts.config_digest = cfg.digest;
  ts.seed = cfg.seed;

  SuiteOptions opt;
  opt.tail_r = cfg.tail_r;
  opt.random_checks = cfg.random_checks;
  opt.rng_seed = cfg.seed ^ 0x9E3779B97F4A7C15ull;
  opt.negativity_tol = cfg.integrator.negativity_tol;
  DiagnosticsReport report = run_suite(ts, cfg.kernel, opt);

  std::string text = format_report(report);
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write report: " + out_path);
    out << text;
    rec.report_path = out_path;
  }
  rec.finished = now_string();
  rec.exit_status = report.overall ? 0 : 1;
  if (!out_path.empty()) write_record(out_path + ".record", rec);
  return report.overall ? 0 : 1;
}

int cmd_converge(const std::string& config_path, const std::string& n_list_text,
                 const std::string& out_path) {
  RunConfig cfg = load_config(config_path);
  std::vector<std::size_t> ns = parse_size_list(n_list_text);
  ConvergenceTable table = convergence_study(cfg.init, cfg.kernel, cfg.integrator, ns, cfg.rhs_path);

  std::ostringstream os;
  os << "n,n_paired,metric_x1,metric_x0,discarded_number,discarded_mass,m1_initial\n";
  for (const ConvergenceRow& row : table.rows)
    os << row.n << ',' << row.n_paired << ',' << format_g17(row.metric_x1) << ','
       << format_g17(row.metric_x0) << ',' << format_g17(row.discarded_number) << ','
       << format_g17(row.discarded_mass) << ',' << format_g17(row.m1_initial) << '\n';
  std::cout << os.str();
  std::cout << "decreasing: " << (table.decreasing ? "yes" : "no") << "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write table: " + out_path);
    out << os.str();
  }
  return 0;
}

int cmd_ssa(const std::string& config_path, double volume, std::uint64_t seed,
            std::size_t replicates, const std::string& out_path) {
  RunConfig cfg = load_config(config_path);
  const std::vector<double>& samples = cfg.integrator.sample_times;

  std::uint64_t mix = seed;
  std::vector<std::uint64_t> seeds(std::max<std::size_t>(replicates, 1));
  for (auto& s : seeds) s = splitmix64(mix);

  std::ostringstream os;
  os << "t,M0,Mhalf,M1,dissipation,clamped_mass\n";
  if (seeds.size() == 1) {
    SsaTrajectory t = ssa_run(cfg.init, cfg.n, cfg.kernel, volume, cfg.integrator.t_end, seeds[0],
                              samples);
    for (std::size_t k = 0; k < t.times.size(); ++k)
      os << format_g17(t.times[k]) << ',' << format_g17(t.moments[k].m0) << ','
         << format_g17(t.moments[k].mhalf) << ',' << format_g17(t.moments[k].m1) << ",0,0\n";
    std::cout << os.str();
    std::cout << "events: " << t.events << " rounding_residual: " << t.rounding_residual << "\n";
  } else {
    SsaEnsemble ens =
        ssa_ensemble(cfg.init, cfg.n, cfg.kernel, volume, cfg.integrator.t_end, seeds, samples);
    for (std::size_t k = 0; k < ens.times.size(); ++k)
      os << format_g17(ens.times[k]) << ',' << format_g17(ens.mean_m0[k]) << ','
         << format_g17(ens.mean_mhalf[k]) << ',' << format_g17(ens.mean_m1[k]) << ",0,0\n";
    std::cout << os.str();
    std::cout << "events per replicate:";
    for (std::size_t e : ens.events_per_replicate) std::cout << ' ' << e;
    std::cout << "\nstandard errors at t_end: M0 " << format_g17(ens.se_m0.back()) << " M1 "
              << format_g17(ens.se_m1.back()) << "\n";
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write trajectory: " + out_path);
    out << os.str();
  }
  return 0;
}

int cmd_bench(const std::string& n_list_text, const std::string& family, double alpha, double scale,
              double c, const std::string& out_path) {
  std::vector<std::size_t> ns = parse_size_list(n_list_text);
  std::vector<KernelSpec> kernels;
  if (family == "constant") {
    kernels.push_back(KernelSpec::constant(c));
  } else if (family == "product") {
    kernels.push_back(KernelSpec::separable_power(alpha, scale));
  } else if (family == "product_plus_constant") {
    kernels.push_back(KernelSpec::separable_plus_constant(alpha, scale, c));
  } else if (family == "table") {
    std::size_t cap = 0;
    for (std::size_t n : ns) cap = std::max(cap, n);
    kernels.push_back(KernelSpec::table(std::vector<double>(cap * cap, 1.0)));
  } else {
    throw ConfigError("unknown bench kernel family: " + family);
  }

  BenchTable table = bench_rhs(ns, kernels);
  std::ostringstream os;
  os << "n,family,path,median_seconds,speedup\n";
  for (const BenchRow& row : table.rows)
    os << row.n << ',' << row.family << ',' << row.path << ',' << format_g17(row.median_seconds)
       << ',' << format_g17(row.speedup) << '\n';
  std::cout << os.str();
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write table: " + out_path);
    out << os.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinetics engine and verification harness for truncated cluster-eating "
               "coagulation systems"};
  app.set_version_flag("--version", std::string(rbk::kVersion));
  app.require_subcommand(1);

  std::string config_path, out_path, n_list, series_path, family = "product";
  bool full = false;
  double volume = 1e4, alpha = 1.0, scale = 1.0, c = 1.0;
  std::uint64_t seed = 1;
  std::size_t replicates = 1;

  CLI::App* sim = app.add_subcommand("simulate", "Integrate a configured run and write CSV output");
  sim->add_option("--config", config_path, "Run configuration file")->required();
  sim->add_option("--out", out_path, "Output CSV path")->required();
  sim->add_flag("--full", full, "Also write per-size densities");

  CLI::App* ver = app.add_subcommand("verify", "Run the diagnostics suite on a configured run");
  ver->add_option("--config", config_path, "Run configuration file")->required();
  ver->add_option("--out", out_path, "Report output path");
  ver->add_option("--series", series_path, "Re-check a stored series CSV instead of integrating");

  CLI::App* con = app.add_subcommand("converge", "Truncation refinement study");
  con->add_option("--config", config_path, "Run configuration file")->required();
  con->add_option("--n", n_list, "Comma-separated truncation sizes")->required();
  con->add_option("--out", out_path, "Table output path");

  CLI::App* ssa_cmd = app.add_subcommand("ssa", "Stochastic particle oracle");
  ssa_cmd->add_option("--config", config_path, "Run configuration file")->required();
  ssa_cmd->add_option("--volume", volume, "Simulation volume")->required();
  ssa_cmd->add_option("--seed", seed, "Base seed for replicate streams");
  ssa_cmd->add_option("--replicates", replicates, "Number of replicates");
  ssa_cmd->add_option("--out", out_path, "Trajectory output path");

  CLI::App* bench = app.add_subcommand("bench", "Time the naive and fast RHS paths");
  bench->add_option("--n", n_list, "Comma-separated sizes")->required();
  bench->add_option("--kernel", family, "Kernel family");
  bench->add_option("--alpha", alpha, "Power exponent");
  bench->add_option("--scale", scale, "Power scale");
  bench->add_option("--c", c, "Constant kappa");
  bench->add_option("--out", out_path, "Table output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are configuration errors
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_path, full);
    if (ver->parsed()) return cmd_verify(config_path, out_path, series_path);
    if (con->parsed()) return cmd_converge(config_path, n_list, out_path);
    if (ssa_cmd->parsed()) return cmd_ssa(config_path, volume, seed, replicates, out_path);
    if (bench->parsed()) return cmd_bench(n_list, family, alpha, scale, c, out_path);
  } catch (const rbk::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rbk::StiffnessError& e) {
    std::cerr << "error: integration stalled: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
