#pragma once

// DFBS side: echo synthesis under the true two-path model and ML angle
// estimation under the DFBS's single-path belief.

#include "isstealth/aoa.hpp"
#include "isstealth/detail/random.hpp"
#include "isstealth/phase_recovery.hpp"
#include "isstealth/scenario.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace isstealth {

struct EchoBlock {
  Eigen::MatrixXcd Y;  ///< M x L received echo
  Eigen::MatrixXcd Z;  ///< M x L noise realization contained in Y
  Eigen::VectorXcd x;  ///< L transmit symbols
  std::uint64_t seed = 0;
  double wavelength = 0.0;
  double spacing_ra = 0.0;
};

struct AoaEstimate {
  double psi_hat = 0.0;
  cd alpha_hat;
  double grid_resolution = 0.0;
};

/// Y = ζ (h4 + H5Θh3)(h1 + h3ᵀΘh2) xᵀ + Z with QPSK symbols of power P and
/// CN(0, σ²) noise. Deterministic in `seed`.
inline EchoBlock simulate_echo(const ChannelSet& ch, const PhaseShiftVector& theta,
                               const ScenarioConfig& config, std::uint64_t seed) {
  const EffectiveChannels eff = apply_phase_shifts(theta, ch);
  const int m = config.num_ra;
  const int len = config.block_length;

  std::mt19937_64 rng(seed);
  EchoBlock echo;
  echo.seed = seed;
  echo.wavelength = config.wavelength;
  echo.spacing_ra = config.spacing_ra;
  echo.x.resize(len);
  const double amp = std::sqrt(config.tx_power);
  for (int l = 0; l < len; ++l) {
    const auto quadrant = static_cast<double>(rng() >> 62);
    echo.x(l) = std::polar(amp, kPi / 4.0 + quadrant * kPi / 2.0);
  }

  echo.Z = Eigen::MatrixXcd::Zero(m, len);
  if (config.noise_power > 0.0) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(config.noise_power / 2.0));
    for (int l = 0; l < len; ++l)
      for (int r = 0; r < m; ++r) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        echo.Z(r, l) = cd(re, im);
      }
  }
  const Eigen::VectorXcd column_gain = config.rcs_coeff * eff.comm * eff.radar;
  echo.Y = column_gain * echo.x.transpose() + echo.Z;
  return echo;
}

/// Grid ML estimate argmax |xᵀ Yᴴ ξ_R(ψ')|² over [0, π], refined by one
/// parabolic step, and the matching nuisance gain.
inline AoaEstimate ml_estimate_aoa(const EchoBlock& echo, double grid_step) {
  const AngleGrid grid(grid_step);
  const auto m = echo.Y.rows();
  // xᵀ Yᴴ ξ = vᴴ ξ with v = Y conj(x).
  const Eigen::VectorXcd v = echo.Y * echo.x.conjugate();
  const double kappa = 2.0 * kPi / echo.wavelength * echo.spacing_ra;

  std::vector<double> metric(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const cd step = std::polar(1.0, -kappa * std::cos(grid[k]));
    cd phasor{1.0, 0.0};
    cd acc{0.0, 0.0};
    for (Eigen::Index r = 0; r < m; ++r) {
      acc += std::conj(v(r)) * phasor;
      phasor *= step;
    }
    metric[k] = std::norm(acc);
  }

  AoaEstimate est;
  est.grid_resolution = grid_step;
  est.psi_hat = detail::refine_peak(grid, metric, detail::argmax(metric));
  const Eigen::VectorXcd a = steering_ra(est.psi_hat, static_cast<int>(m), echo.wavelength, echo.spacing_ra);
  const double energy = static_cast<double>(m) * echo.x.squaredNorm();
  est.alpha_hat = energy > 0.0 ? a.dot(v) / energy : cd{};
  return est;
}

/// Downlink SNR (P/σ²)|h1 + ξ2 ν|², linear.
inline double user_snr(const ChannelSet& ch, cd nu, const ScenarioConfig& config) {
  const double gain = std::norm(ch.h1 + ch.xi(2) * nu);
  if (config.noise_power == 0.0) return gain > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return config.tx_power / config.noise_power * gain;
}

struct MonteCarloResult {
  std::vector<double> psi_hats;
  double mean_error_deg = 0.0;
};

/// Mean ML angle error over `trials` independent echoes; trial t uses the
/// stream derive_seed(seed, t) and results are accumulated in trial order.
inline MonteCarloResult monte_carlo_aoa(const ChannelSet& ch, const PhaseShiftVector& theta,
                                        const ScenarioConfig& config, int trials, std::uint64_t seed,
                                        double grid_step) {
  MonteCarloResult out;
  out.psi_hats.reserve(static_cast<std::size_t>(std::max(trials, 0)));
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    const EchoBlock echo = simulate_echo(ch, theta, config, detail::derive_seed(seed, static_cast<std::uint64_t>(t)));
    const double psi = ml_estimate_aoa(echo, grid_step).psi_hat;
    out.psi_hats.push_back(psi);
    sum += angle_error_deg(psi, ch.psi4_aoa);
  }
  out.mean_error_deg = trials > 0 ? sum / trials : 0.0;
  return out;
}

}  // namespace isstealth
