#pragma once

// Experiment orchestration: the proposed closed-form design, the exhaustive
// angle-error search and the max-inner baseline, evaluated per scenario and
// across the location, Ny and SNR-enhancement sweeps.

#include "isstealth/config.hpp"
#include "isstealth/errors.hpp"
#include "isstealth/nu_solver.hpp"
#include "isstealth/phase_recovery.hpp"
#include "isstealth/sensing.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace isstealth {

enum class Method { kProposed = 0, kExhaustive = 1, kMaxInner = 2 };
enum class Estimator { kAsymptotic, kMonteCarlo };
enum class SweepKind { kIsLocationY, kIsLocationX, kNy, kSnrEnhancementDb };

inline constexpr std::array<Method, 3> kAllMethods{Method::kProposed, Method::kExhaustive, Method::kMaxInner};

inline const char* method_name(Method m) {
  switch (m) {
    case Method::kProposed: return "proposed";
    case Method::kExhaustive: return "exhaustive";
    case Method::kMaxInner: return "maxinner";
  }
  return "?";
}

inline const char* sweep_name(SweepKind k) {
  switch (k) {
    case SweepKind::kIsLocationY: return "is_location_y";
    case SweepKind::kIsLocationX: return "is_location_x";
    case SweepKind::kNy: return "ny";
    case SweepKind::kSnrEnhancementDb: return "snr_enhancement_db";
  }
  return "?";
}

struct PointOptions {
  Estimator estimator = Estimator::kAsymptotic;
  int trials = 1;
  std::uint64_t seed = 1;
  double grid_step_deg = 0.01;
  OracleOptions exhaustive{100, 360, deg_to_rad(0.01)};
};

/// Outcome of one method at one scenario.
struct MethodResult {
  Method method = Method::kProposed;
  bool feasible = false;
  cd nu;
  int candidate_index = -1;
  double objective = 0.0;  ///< sensing utility at ν (probe ψ4)
  double snr = 0.0;        ///< achieved downlink SNR, linear
  double err_deg = std::numeric_limits<double>::quiet_NaN();
  int trials = 0;
};

inline MethodResult unevaluated(Method m) {
  MethodResult r;
  r.method = m;
  return r;
}

struct PointResult {
  ScenarioConfig config;
  bool feasible = false;
  std::string error;  ///< reason when infeasible
  std::vector<MethodResult> methods;

  const MethodResult* find(Method m) const {
    for (const auto& r : methods)
      if (r.method == m) return &r;
    return nullptr;
  }
};

/// Runs the requested methods on one scenario. Methods share the channel set,
/// the AoA metric table and, in Monte Carlo mode, the noise realizations.
/// An unreachable SNR floor yields a result with feasible = false.
inline PointResult evaluate_point(const ScenarioConfig& config, const std::vector<Method>& methods,
                                  const PointOptions& opt) {
  PointResult out;
  out.config = config;
  const ChannelSet ch = derive_channels(config);
  const double step = deg_to_rad(opt.grid_step_deg);
  const NuProblem sensing = build_problem(ch, config, ch.psi4_aoa);
  if (!sensing.nonempty()) {
    out.error = "infeasible: SNR floor unreachable";
    for (Method m : methods) out.methods.push_back(unevaluated(m));
    return out;
  }

  const AsymptoticAoaMetric metric(ch, step);
  try {
    for (Method m : methods) {
      MethodResult r;
      r.method = m;
      NuSolution sol;
      switch (m) {
        case Method::kProposed:
          sol = solve_min(sensing);
          break;
        case Method::kMaxInner:
          sol = solve_max(build_problem(ch, config, ch.psi5_aoa));
          break;
        case Method::kExhaustive: {
          OracleOptions o = opt.exhaustive;
          o.aoa_grid_step = step;
          sol = brute_force_nu(sensing, OracleMode::kMaxAoaError, ch, o);
          break;
        }
      }
      r.feasible = true;
      r.nu = sol.nu;
      r.candidate_index = sol.candidate_index;
      r.objective = objective_quadratic(sol.nu, sensing);
      r.snr = user_snr(ch, sol.nu, config);
      if (opt.estimator == Estimator::kAsymptotic) {
        r.err_deg = angle_error_deg(metric.estimate(sol.nu), ch.psi4_aoa);
        r.trials = 1;
      } else {
        const PhaseShiftVector theta = recover_phases(sol.nu, ch, config);
        r.err_deg = monte_carlo_aoa(ch, theta, config, opt.trials, opt.seed, step).mean_error_deg;
        r.trials = opt.trials;
      }
      out.methods.push_back(r);
    }
  } catch (const InfeasibleScenario& e) {
    out.error = e.what();
    out.methods.clear();
    for (Method m : methods) out.methods.push_back(unevaluated(m));
    return out;
  }
  out.feasible = true;
  return out;
}

inline MethodResult run_point(const ScenarioConfig& config, Method method, const PointOptions& opt) {
  return evaluate_point(config, {method}, opt).methods.front();
}

struct ExperimentSpec {
  ScenarioConfig base;
  SnrRequirement snr;  ///< ignored by the SNR-enhancement sweep, which sets Δ per point
  SweepKind sweep = SweepKind::kIsLocationY;
  std::vector<double> values;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  PointOptions point;
};

/// One CSV row. Rows come per (sweep value, method); error columns hold every
/// method evaluated at the point, the remaining fields describe `method`.
struct SweepRecord {
  std::string sweep_name;
  double sweep_value = 0.0;
  double err_proposed_deg = std::numeric_limits<double>::quiet_NaN();
  double err_exhaustive_deg = std::numeric_limits<double>::quiet_NaN();
  double err_maxinner_deg = std::numeric_limits<double>::quiet_NaN();
  double nu_proposed_re = std::numeric_limits<double>::quiet_NaN();
  double nu_proposed_im = std::numeric_limits<double>::quiet_NaN();
  double snr_achieved_db = std::numeric_limits<double>::quiet_NaN();
  int candidate_index = -1;
  int trials = 0;
  std::string method;
  double nu_re = std::numeric_limits<double>::quiet_NaN();
  double nu_im = std::numeric_limits<double>::quiet_NaN();
  double snr_floor_db = std::numeric_limits<double>::quiet_NaN();
};

/// Scenario for the sweep value, with η resolved.
inline ScenarioConfig sweep_point_config(const ExperimentSpec& spec, double value) {
  ScenarioConfig c = spec.base;
  SnrRequirement snr = spec.snr;
  switch (spec.sweep) {
    case SweepKind::kIsLocationY: c.pos_is = Vec3(0.0, value, 0.0); break;
    case SweepKind::kIsLocationX: c.pos_is = Vec3(value, 0.0, 0.0); break;
    case SweepKind::kNy:
      if (value < 1.0 || value != std::floor(value)) throw std::invalid_argument("ny sweep values must be positive integers");
      c.ny = static_cast<int>(value);
      break;
    case SweepKind::kSnrEnhancementDb: snr = {SnrRequirement::Kind::kEnhancementDb, value}; break;
  }
  apply_snr_requirement(c, snr);
  return c;
}

inline std::vector<SweepRecord> records_for_point(const std::string& name, double value, const PointResult& pt) {
  std::vector<SweepRecord> rows;
  SweepRecord common;
  common.sweep_name = name;
  common.sweep_value = value;
  common.snr_floor_db = pt.config.snr_floor > 0.0 ? linear_to_db(pt.config.snr_floor)
                                                  : -std::numeric_limits<double>::infinity();
  if (pt.feasible) {
    for (const auto& r : pt.methods) {
      switch (r.method) {
        case Method::kProposed:
          common.err_proposed_deg = r.err_deg;
          common.nu_proposed_re = r.nu.real();
          common.nu_proposed_im = r.nu.imag();
          break;
        case Method::kExhaustive: common.err_exhaustive_deg = r.err_deg; break;
        case Method::kMaxInner: common.err_maxinner_deg = r.err_deg; break;
      }
    }
  }
  for (const auto& r : pt.methods) {
    SweepRecord row = common;
    row.method = method_name(r.method);
    if (pt.feasible) {
      row.nu_re = r.nu.real();
      row.nu_im = r.nu.imag();
      row.snr_achieved_db = linear_to_db(r.snr);
      row.candidate_index = r.candidate_index;
      row.trials = r.trials;
    }
    rows.push_back(row);
  }
  return rows;
}

/// Evaluates every sweep value in order. Point i uses the seed
/// derive_seed(spec.point.seed, i); infeasible points become sentinel rows
/// (trials = 0, candidate_index = -1) rather than aborting the sweep.
inline std::vector<SweepRecord> run_sweep(const ExperimentSpec& spec, std::vector<PointResult>* points = nullptr) {
  if (spec.values.empty()) throw std::invalid_argument("run_sweep: no sweep values");
  if (spec.point.trials < 1) throw std::invalid_argument("run_sweep: trials >= 1 required");
  std::vector<SweepRecord> out;
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const double value = spec.values[i];
    PointOptions opt = spec.point;
    opt.seed = detail::derive_seed(spec.point.seed, i);
    PointResult pt;
    try {
      pt = evaluate_point(sweep_point_config(spec, value), spec.methods, opt);
    } catch (const std::invalid_argument& e) {
      pt.config = spec.base;
      pt.error = e.what();
      for (Method m : spec.methods) pt.methods.push_back(unevaluated(m));
    }
    auto rows = records_for_point(sweep_name(spec.sweep), value, pt);
    out.insert(out.end(), rows.begin(), rows.end());
    if (points) points->push_back(std::move(pt));
  }
  return out;
}

inline std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return v;
}

/// Default sweep axes.
inline std::vector<double> default_sweep_values(SweepKind k) {
  switch (k) {
    case SweepKind::kIsLocationY:
    case SweepKind::kIsLocationX: return linspace(-20.0, 20.0, 41);
    case SweepKind::kNy: return linspace(5.0, 50.0, 10);
    case SweepKind::kSnrEnhancementDb: return linspace(0.0, 10.0, 11);
  }
  return {};
}

// CSV

inline constexpr std::array<const char*, 14> kCsvColumns{
    "sweep_name",     "sweep_value",     "err_proposed_deg", "err_exhaustive_deg", "err_maxinner_deg",
    "nu_proposed_re", "nu_proposed_im",  "snr_achieved_db",  "candidate_index",    "trials",
    "method",         "nu_re",           "nu_im",            "snr_floor_db"};

namespace detail {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline void emit_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) out << (i ? "," : "") << kCsvColumns[i];
  out << '\n';
  using detail::format_real;
  for (const auto& r : records) {
    out << r.sweep_name << ',' << format_real(r.sweep_value) << ',' << format_real(r.err_proposed_deg) << ','
        << format_real(r.err_exhaustive_deg) << ',' << format_real(r.err_maxinner_deg) << ','
        << format_real(r.nu_proposed_re) << ',' << format_real(r.nu_proposed_im) << ','
        << format_real(r.snr_achieved_db) << ',' << r.candidate_index << ',' << r.trials << ',' << r.method << ','
        << format_real(r.nu_re) << ',' << format_real(r.nu_im) << ',' << format_real(r.snr_floor_db) << '\n';
  }
}

inline void emit_csv(const std::vector<SweepRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  emit_csv(records, out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace isstealth
