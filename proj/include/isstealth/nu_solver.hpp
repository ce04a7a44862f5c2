#pragma once

// Reduced surface design. With ν = α2 h3ᵀ Θ ξ_I(ψ2), the sensing utility becomes
//   f(ν) = a|ν|² + 2 Re(b* ν) + const0
// over the annulus-like set
//   V = { ν : |h1 + ξ2 ν| >= ρ, |ν| <= R },
// which is solved exactly by scoring a finite candidate list.

#include "isstealth/aoa.hpp"
#include "isstealth/errors.hpp"
#include "isstealth/scenario.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

namespace isstealth {

struct NuProblem {
  double a = 0.0;
  cd b;
  double const0 = 0.0;
  cd h1;
  cd xi2{1.0, 0.0};
  double outer_radius = 0.0;      ///< R = N α2 α3
  double forbidden_radius = 0.0;  ///< ρ = σ sqrt(η / P)

  /// Center of the forbidden circle in the ν plane, -h1 ξ2*.
  cd forbidden_center() const { return -h1 * std::conj(xi2); }
  double snr_floor_scaled() const { return forbidden_radius * forbidden_radius; }
  bool nonempty() const { return std::abs(h1) + outer_radius >= forbidden_radius; }
};

struct NuSolution {
  cd nu;
  double objective = 0.0;
  int candidate_index = 0;  ///< 1..7 for closed-form candidates, 0 for grid/fallback
  bool feasible = false;
};

/// Builds the reduced problem for correlation against ξ_R(probe). With
/// probe = ψ4 this is the sensing utility; probe = ψ5 gives the max-inner one.
inline NuProblem build_problem(const ChannelSet& ch, const ScenarioConfig& config, double probe) {
  const int m = config.num_ra;
  const Eigen::VectorXcd a5 = steering_ra(ch.psi5_aoa, m, config.wavelength, config.spacing_ra);
  const Eigen::VectorXcd a4 = steering_ra(ch.psi4_aoa, m, config.wavelength, config.spacing_ra);
  const Eigen::VectorXcd ap = steering_ra(probe, m, config.wavelength, config.spacing_ra);
  const cd c = a5.dot(ap);  // reflected-path correlation
  const cd g = a4.dot(ap);  // direct-path correlation

  NuProblem p;
  p.a = std::norm(c);
  p.b = ch.alpha(4) * ch.xi(4) * std::conj(ch.xi(5)) * std::conj(g) * c;
  p.const0 = ch.alpha(4) * ch.alpha(4) * std::norm(g);
  p.h1 = ch.h1;
  p.xi2 = ch.xi(2);
  p.outer_radius = config.num_elements() * ch.alpha(2) * ch.alpha(3);
  p.forbidden_radius =
      config.tx_power > 0.0 ? std::sqrt(config.noise_power * config.snr_floor / config.tx_power) : 0.0;
  return p;
}

inline double objective_quadratic(cd nu, const NuProblem& p) {
  return p.a * std::norm(nu) + 2.0 * (std::conj(p.b) * nu).real() + p.const0;
}

/// Relative-tolerance membership test for V.
inline bool is_feasible(cd nu, const NuProblem& p, double tol) {
  const bool in_disk = std::abs(nu) <= p.outer_radius * (1.0 + tol);
  const bool meets_floor = std::norm(p.h1 + p.xi2 * nu) >= p.snr_floor_scaled() * (1.0 - tol);
  return in_disk && meets_floor;
}

struct CandidateSet {
  std::array<std::optional<cd>, 7> values;  ///< values[i] is candidate i+1
  bool degenerate = false;                  ///< a = b = 0: objective is constant

  std::size_t count() const {
    std::size_t n = 0;
    for (const auto& v : values) n += v.has_value();
    return n;
  }
};

/// The seven geometric candidates: the unconstrained minimizer -b/a, the two
/// circle intersections, the two forbidden-circle points collinear with -b/a and
/// the circle center, and the two outer-circle points on the ray through -b/a.
/// Candidates whose construction is ill-posed are left empty.
inline CandidateSet enumerate_candidates(const NuProblem& p, double tol = 1e-9) {
  CandidateSet out;
  const double r_out = p.outer_radius;
  const double rho = p.forbidden_radius;
  const cd h1x = p.h1 * std::conj(p.xi2);
  const double h1_abs = std::abs(p.h1);

  if (r_out > 0.0 && h1_abs > 0.0) {
    const double arg = (rho * rho - r_out * r_out - h1_abs * h1_abs) / (2.0 * r_out * h1_abs);
    if (arg >= -1.0 && arg <= 1.0) {
      const double base = std::arg(h1x);
      const double spread = std::acos(arg);
      out.values[1] = std::polar(r_out, base + spread);
      out.values[2] = std::polar(r_out, base - spread);
    }
  }

  const bool have_quadratic = p.a > tol;
  const bool have_linear = std::abs(p.b) > tol;
  if (!have_quadratic && !have_linear) {
    out.degenerate = true;
    return out;
  }

  if (have_quadratic) {
    const cd center = -p.b / p.a;
    out.values[0] = center;
    const double dir_forbidden = std::arg(center + h1x);
    out.values[3] = std::polar(rho, dir_forbidden) - h1x;
    out.values[4] = -std::polar(rho, dir_forbidden) - h1x;
    // -b/a can be a signed zero whose arg is -pi; pin that direction to 0.
    const double dir = center == cd{} ? 0.0 : std::arg(center);
    out.values[5] = std::polar(r_out, dir);
    out.values[6] = -std::polar(r_out, dir);
  } else {
    // a -> 0 limit: -b/a runs off to infinity along -b, so only the
    // direction survives and there is no interior stationary point.
    const double dir = std::arg(-p.b);
    out.values[3] = std::polar(rho, dir) - h1x;
    out.values[4] = -std::polar(rho, dir) - h1x;
    out.values[5] = std::polar(r_out, dir);
    out.values[6] = -std::polar(r_out, dir);
  }
  return out;
}

namespace detail {

inline void require_nonempty(const NuProblem& p, double tol) {
  if (std::abs(p.h1) + p.outer_radius < p.forbidden_radius * (1.0 - tol))
    throw InfeasibleScenario(
        "SNR floor unreachable: |h1| + N*alpha2*alpha3 is below sigma*sqrt(eta/P)");
}

/// Point of V with the largest SNR margin.
inline NuSolution snr_maximizer(const NuProblem& p) {
  NuSolution s;
  s.nu = std::polar(p.outer_radius, std::arg(p.h1 * std::conj(p.xi2)));
  s.objective = objective_quadratic(s.nu, p);
  s.candidate_index = 0;
  s.feasible = true;
  return s;
}

template <typename Better>
NuSolution pick_candidate(const NuProblem& p, double tol, Better better) {
  require_nonempty(p, tol);
  const CandidateSet cands = enumerate_candidates(p, tol);
  if (cands.degenerate) return snr_maximizer(p);

  std::optional<NuSolution> best;
  for (std::size_t i = 0; i < cands.values.size(); ++i) {
    if (!cands.values[i] || !is_feasible(*cands.values[i], p, tol)) continue;
    const double f = objective_quadratic(*cands.values[i], p);
    if (!best || better(f, best->objective)) {
      best = NuSolution{*cands.values[i], f, static_cast<int>(i) + 1, true};
    }
  }
  if (!best) throw InfeasibleScenario("no feasible candidate survived filtering");
  return *best;
}

}  // namespace detail

/// Global minimizer of the sensing utility over V. Ties go to the lowest index.
inline NuSolution solve_min(const NuProblem& p, double tol = 1e-9) {
  return detail::pick_candidate(p, tol, [](double f, double best) { return f < best; });
}

/// Global maximizer over V. The objective is convex, so the maximum sits on the
/// boundary; index 7 is the point R e^{j∠b} aligned with the linear term.
inline NuSolution solve_max(const NuProblem& p, double tol = 1e-9) {
  return detail::pick_candidate(p, tol, [](double f, double best) { return f > best; });
}

enum class OracleMode { kMin, kMax, kMaxAoaError };

/// Worst-case objective gap between a point of V and its nearest polar grid node.
inline double grid_cell_bound(const NuProblem& p, int radial_steps, int angular_steps) {
  const double dr = p.outer_radius / (radial_steps - 1);
  const double dphi = 2.0 * kPi / angular_steps;
  const double r = p.outer_radius;
  return p.a * (dr * dr + r * r * dphi * dphi) + 2.0 * std::abs(p.b) * (dr + r * dphi);
}

struct OracleOptions {
  int radial_steps = 2000;
  int angular_steps = 2000;
  double aoa_grid_step = deg_to_rad(0.01);  ///< estimator resolution for kMaxAoaError
};

namespace detail {

/// Strictly feasible nodes of the polar grid r_i = R i/(n_r-1), φ_k = 2πk/n_φ,
/// visited radius-major so the first hit of a tie has the smallest radius, then
/// the smallest angle.
template <typename Visit>
void for_each_grid_node(const NuProblem& p, int radial_steps, int angular_steps, Visit visit) {
  const cd w = p.forbidden_center();
  const double w2 = std::norm(w);
  const double rho2 = p.snr_floor_scaled();
  std::vector<double> cosv(angular_steps), sinv(angular_steps), wdot(angular_steps);
  for (int k = 0; k < angular_steps; ++k) {
    const double phi = 2.0 * kPi * k / angular_steps;
    cosv[k] = std::cos(phi);
    sinv[k] = std::sin(phi);
    wdot[k] = w.real() * cosv[k] + w.imag() * sinv[k];
  }
  for (int i = 0; i < radial_steps; ++i) {
    const double r = p.outer_radius * i / (radial_steps - 1);
    for (int k = 0; k < angular_steps; ++k) {
      if (r * r - 2.0 * r * wdot[k] + w2 < rho2) continue;
      visit(r, k, cosv[k], sinv[k]);
      if (r == 0.0) break;  // the origin appears once, at φ = 0
    }
    if (r == 0.0 && p.outer_radius == 0.0) break;
  }
}

}  // namespace detail

/// Grid oracle. kMin/kMax extremize the quadratic utility on a plain polar grid.
/// kMaxAoaError is the exhaustive baseline: it maximizes the asymptotic angle
/// error over the grid, a sampling of the forbidden circle, and the geometric
/// candidates; its `objective` is the angle error in radians. An empty feasible
/// set raises InfeasibleScenario.
inline NuSolution brute_force_nu(const NuProblem& p, OracleMode mode, const ChannelSet& ch,
                                 const OracleOptions& opt = {}) {
  if (opt.radial_steps < 2 || opt.angular_steps < 2)
    throw std::invalid_argument("brute_force_nu: at least 2 radial and angular steps required");

  std::optional<NuSolution> best;
  auto offer = [&](cd nu, double score) {
    if (!best || (mode == OracleMode::kMin ? score < best->objective : score > best->objective))
      best = NuSolution{nu, score, 0, true};
  };

  if (mode != OracleMode::kMaxAoaError) {
    const double a = p.a, c0 = p.const0, br = p.b.real(), bi = p.b.imag();
    detail::for_each_grid_node(p, opt.radial_steps, opt.angular_steps,
                               [&](double r, int, double c, double s) {
                                 offer(cd(r * c, r * s),
                                       a * r * r + 2.0 * r * (br * c + bi * s) + c0);
                               });
    if (!best) throw InfeasibleScenario("brute_force_nu: no feasible grid node");
    // Report the objective of the returned value itself.
    best->objective = objective_quadratic(best->nu, p);
    return *best;
  }

  const AsymptoticAoaMetric metric(ch, opt.aoa_grid_step);
  auto score = [&](cd nu) { return std::abs(metric.estimate(nu) - ch.psi4_aoa); };
  detail::for_each_grid_node(p, opt.radial_steps, opt.angular_steps,
                             [&](double r, int k, double, double) {
                               const cd nu = std::polar(r, 2.0 * kPi * k / opt.angular_steps);
                               offer(nu, score(nu));
                             });
  const cd w = p.forbidden_center();
  for (int k = 0; k < opt.angular_steps; ++k) {
    const cd nu = w + std::polar(p.forbidden_radius, 2.0 * kPi * k / opt.angular_steps);
    if (is_feasible(nu, p, 1e-9)) offer(nu, score(nu));
  }
  const CandidateSet cands = enumerate_candidates(p);
  for (const auto& v : cands.values)
    if (v && is_feasible(*v, p, 1e-9)) offer(*v, score(*v));
  if (!best) throw InfeasibleScenario("brute_force_nu: no feasible grid node");
  return *best;
}

}  // namespace isstealth
