// isstealth command line: single-scenario solves, the three sweeps and a
// Monte Carlo echo simulation, all writing CSV.
//
// Exit codes: 0 ok, 1 parse/validation error, 2 infeasible solve, 3 I/O error.

#include "isstealth/isstealth.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace isstealth;

namespace {

constexpr int kExitParse = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIo = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string method;
  std::string estimator = "asymptotic";
  std::vector<double> values;
};

void add_common(CLI::App* cmd, CommonArgs& a, const std::string& default_method) {
  a.method = default_method;
  cmd->add_option("--config", a.config_path, "key = value scenario file")->check(CLI::ExistingFile);
  cmd->add_option("--out", a.out_path, "CSV output path (default: standard output)");
  cmd->add_option("--seed", a.seed, "base RNG seed (overrides the config)");
  cmd->add_option("--trials", a.trials, "Monte Carlo trials per point (overrides the config)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--method", a.method, "proposed|exhaustive|maxinner|all")
      ->check(CLI::IsMember({"proposed", "exhaustive", "maxinner", "all"}))
      ->capture_default_str();
  cmd->add_option("--estimator", a.estimator, "asymptotic|monte-carlo")
      ->check(CLI::IsMember({"asymptotic", "monte-carlo"}))
      ->capture_default_str();
}

void add_values(CLI::App* cmd, CommonArgs& a, const char* what) {
  cmd->add_option("--values", a.values, std::string("comma-separated ") + what + " (default: built-in axis)")
      ->delimiter(',');
}

std::vector<Method> methods_of(const std::string& name) {
  if (name == "all") return {kAllMethods.begin(), kAllMethods.end()};
  for (Method m : kAllMethods)
    if (name == method_name(m)) return {m};
  throw std::invalid_argument("unknown method '" + name + "'");
}

RunConfig load(const CommonArgs& a) {
  RunConfig cfg = a.config_path.empty() ? RunConfig{} : parse_config_file(a.config_path);
  if (a.seed) cfg.seed = *a.seed;
  if (a.trials) cfg.trials = *a.trials;
  return cfg;
}

PointOptions point_options(const RunConfig& cfg, const CommonArgs& a) {
  PointOptions o;
  o.estimator = a.estimator == "monte-carlo" ? Estimator::kMonteCarlo : Estimator::kAsymptotic;
  o.trials = cfg.trials;
  o.seed = cfg.seed;
  o.grid_step_deg = cfg.grid_step_deg;
  o.exhaustive.aoa_grid_step = deg_to_rad(cfg.grid_step_deg);
  return o;
}

// Writes to --out or standard output.
template <typename Fn>
void write_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

int run_solve(const CommonArgs& a) {
  const RunConfig cfg = load(a);
  const ScenarioConfig sc = cfg.resolved();
  const PointResult pt = evaluate_point(sc, methods_of(a.method), point_options(cfg, a));
  if (!pt.feasible) {
    std::cerr << "isstealth: " << pt.error << " (eta = " << linear_to_db(sc.snr_floor) << " dB)\n";
    return kExitInfeasible;
  }
  const ChannelSet ch = derive_channels(sc);
  std::printf("psi4_aoa_deg      %.10g\n", rad_to_deg(ch.psi4_aoa));
  std::printf("psi5_aoa_deg      %.10g\n", rad_to_deg(ch.psi5_aoa));
  std::printf("snr_floor_db      %.10g\n", linear_to_db(sc.snr_floor));
  std::printf("snr_baseline_db   %.10g\n", linear_to_db(baseline_snr(sc)));
  for (const auto& r : pt.methods) {
    std::printf("[%s]\n", method_name(r.method));
    std::printf("  nu              %.17g %+.17gj\n", r.nu.real(), r.nu.imag());
    std::printf("  candidate       %d\n", r.candidate_index);
    std::printf("  utility         %.10g\n", r.objective);
    std::printf("  snr_db          %.10g\n", linear_to_db(r.snr));
    std::printf("  aoa_error_deg   %.10g\n", r.err_deg);
  }
  if (!a.out_path.empty())
    write_output(a.out_path, [&](std::ostream& o) { emit_csv(records_for_point("solve", 0.0, pt), o); });
  return 0;
}

int run_sweep_cmd(const CommonArgs& a, const std::vector<SweepKind>& kinds) {
  const RunConfig cfg = load(a);
  std::vector<SweepRecord> rows;
  for (SweepKind k : kinds) {
    ExperimentSpec spec;
    spec.base = cfg.scenario;
    spec.snr = cfg.snr;
    spec.sweep = k;
    spec.values = a.values.empty() ? default_sweep_values(k) : a.values;
    spec.methods = methods_of(a.method);
    spec.point = point_options(cfg, a);
    auto part = run_sweep(spec);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  int infeasible = 0;
  for (const auto& r : rows)
    if (r.trials == 0) ++infeasible;
  if (infeasible) std::cerr << "isstealth: " << infeasible << " infeasible record(s) written as sentinels\n";
  write_output(a.out_path, [&](std::ostream& o) { emit_csv(rows, o); });
  return 0;
}

int run_echo_sim(const CommonArgs& a) {
  const RunConfig cfg = load(a);
  const ScenarioConfig sc = cfg.resolved();
  const std::vector<Method> methods = methods_of(a.method);
  PointOptions opt = point_options(cfg, a);
  const PointResult pt = evaluate_point(sc, methods, opt);
  if (!pt.feasible) {
    std::cerr << "isstealth: " << pt.error << '\n';
    return kExitInfeasible;
  }
  const ChannelSet ch = derive_channels(sc);
  const double step = deg_to_rad(cfg.grid_step_deg);
  std::ostringstream csv;
  csv << "method,trial,psi_hat_deg,err_deg\n";
  char buf[128];
  for (const auto& r : pt.methods) {
    const PhaseShiftVector theta = recover_phases(r.nu, ch, sc);
    const MonteCarloResult mc = monte_carlo_aoa(ch, theta, sc, cfg.trials, cfg.seed, step);
    for (std::size_t t = 0; t < mc.psi_hats.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%s,%zu,%.17g,%.17g\n", method_name(r.method), t,
                    rad_to_deg(mc.psi_hats[t]), angle_error_deg(mc.psi_hats[t], ch.psi4_aoa));
      csv << buf;
    }
    std::fprintf(stderr, "%s: mean AoA error %.6g deg over %d trials\n", method_name(r.method), mc.mean_error_deg,
                 cfg.trials);
  }
  write_output(a.out_path, [&](std::ostream& o) { o << csv.str(); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form IS phase design against DFBS angle estimation"};
  app.require_subcommand(1);

  CommonArgs solve_args, loc_args, ny_args, snr_args, echo_args;
  std::string axis = "y";

  auto* solve = app.add_subcommand("solve", "solve one scenario and print the solution summary");
  add_common(solve, solve_args, "all");

  auto* loc = app.add_subcommand("sweep-location", "sweep the IS position along a floor axis");
  add_common(loc, loc_args, "all");
  add_values(loc, loc_args, "coordinates in metres");
  loc->add_option("--axis", axis, "x|y|both")->check(CLI::IsMember({"x", "y", "both"}))->capture_default_str();

  auto* ny = app.add_subcommand("sweep-ny", "sweep the number of IS columns");
  add_common(ny, ny_args, "all");
  add_values(ny, ny_args, "Ny values");

  auto* snr = app.add_subcommand("sweep-snr", "sweep the SNR enhancement over the no-IS baseline");
  add_common(snr, snr_args, "all");
  add_values(snr, snr_args, "enhancements in dB");

  auto* echo = app.add_subcommand("echo-sim", "Monte Carlo ML estimation for the designed phase shifts");
  add_common(echo, echo_args, "proposed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (*solve) return run_solve(solve_args);
    if (*loc) {
      std::vector<SweepKind> kinds;
      if (axis != "x") kinds.push_back(SweepKind::kIsLocationY);
      if (axis != "y") kinds.push_back(SweepKind::kIsLocationX);
      return run_sweep_cmd(loc_args, kinds);
    }
    if (*ny) return run_sweep_cmd(ny_args, {SweepKind::kNy});
    if (*snr) return run_sweep_cmd(snr_args, {SweepKind::kSnrEnhancementDb});
    if (*echo) return run_echo_sim(echo_args);
  } catch (const ParseError& e) {
    std::cerr << "isstealth: config error: " << e.what() << '\n';
    return kExitParse;
  } catch (const IoError& e) {
    std::cerr << "isstealth: " << e.what() << '\n';
    return kExitIo;
  } catch (const InfeasibleScenario& e) {
    std::cerr << "isstealth: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "isstealth: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::out_of_range& e) {
    std::cerr << "isstealth: " << e.what() << '\n';
    return kExitParse;
  }
  return 0;
}
