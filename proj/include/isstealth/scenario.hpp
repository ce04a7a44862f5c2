#pragma once

// Geometry-driven channel model: a single-antenna transmitter colocated with an
// M-element receive array along x, and a planar surface whose rows lie along y.
// Every channel, angle and steering vector is derived from ScenarioConfig.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace isstealth {

using cd = std::complex<double>;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

struct ScenarioConfig {
  Vec3 pos_dfbs{10.0, 20.0, 0.0};
  Vec3 pos_user{5.0, -5.0, 0.0};
  Vec3 pos_is{0.0, 0.0, 0.0};
  int num_ra = 4;  ///< M
  int ny = 30;
  int nz = 10;
  double wavelength = 0.06;
  double spacing_ra = 0.03;
  double spacing_is = 0.03;
  double tx_power = 0.01;      ///< P [W]
  double noise_power = 1e-14;  ///< σ² [W]
  double snr_floor = 0.0;      ///< η, linear
  int block_length = 1000;     ///< L
  cd rcs_coeff{1.0, 0.0};      ///< ζ

  int num_elements() const noexcept { return ny * nz; }

  /// Throws std::invalid_argument naming the first violated constraint.
  /// σ² = 0 is accepted so that noiseless echoes can be simulated.
  void validate() const {
    auto require = [](bool ok, const char* msg) {
      if (!ok) throw std::invalid_argument(msg);
    };
    require(num_ra >= 2, "m_antennas: M >= 2 required");
    require(ny >= 1 && nz >= 1, "ny, nz: at least one element per row and column required");
    require(wavelength > 0.0, "wavelength_m must be positive");
    require(spacing_ra > 0.0, "spacing_ra_m must be positive");
    require(spacing_is > 0.0, "spacing_is_m must be positive");
    require(tx_power > 0.0, "tx_power must be positive");
    require(noise_power >= 0.0, "noise_power must be non-negative");
    require(snr_floor >= 0.0, "snr floor must be non-negative");
    require(block_length >= 1, "block_length: L >= 1 required");
    require((pos_user - pos_dfbs).norm() > 0.0, "pos_user coincides with pos_dfbs");
    require((pos_is - pos_dfbs).norm() > 0.0, "pos_is coincides with pos_dfbs");
    require((pos_user - pos_is).norm() > 0.0, "pos_user coincides with pos_is");
  }
};

/// Amplitude path-loss coefficient 10^(-(30 + 22 log10 d)/20).
inline double path_loss(double distance) {
  if (!(distance > 0.0)) throw std::invalid_argument("path_loss: distance must be positive");
  return std::pow(10.0, -(30.0 + 22.0 * std::log10(distance)) / 20.0);
}

/// Uniform linear array response; entry m is exp(-j 2π/λ · spacing · m · cos ψ).
inline Eigen::VectorXcd steering_ra(double psi, int num_ant, double wavelength, double spacing) {
  Eigen::VectorXcd v(num_ant);
  const double k = 2.0 * kPi / wavelength * spacing * std::cos(psi);
  for (int m = 0; m < num_ant; ++m) v(m) = std::polar(1.0, -k * m);
  return v;
}

/// Surface response: the length-ny row pattern repeated nz times.
inline Eigen::VectorXcd steering_is(double psi, int ny, int nz, double wavelength, double spacing) {
  const Eigen::VectorXcd row = steering_ra(psi, ny, wavelength, spacing);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(ny) * nz);
  for (int z = 0; z < nz; ++z) v.segment(static_cast<Eigen::Index>(z) * ny, ny) = row;
  return v;
}

struct ChannelSet {
  // Indices follow the link numbering: 1 TA->user, 2 TA->IS, 3 IS->user,
  // 4 user->RA, 5 IS->RA. Stored 0-based.
  int num_ra = 0;
  int num_elements = 0;
  double wavelength = 0.0;
  double spacing_ra = 0.0;

  std::array<double, 5> distances{};
  std::array<double, 5> alphas{};
  std::array<cd, 5> xis{};

  double psi2_aoa = 0.0;
  double psi3_aod = 0.0;
  double psi4_aoa = 0.0;
  double psi5_aoa = 0.0;
  double psi5_aod = 0.0;

  cd h1;
  Eigen::VectorXcd h2;
  Eigen::VectorXcd h3;
  Eigen::VectorXcd h4;
  Eigen::MatrixXcd H5;

  double alpha(int link) const { return alphas.at(link - 1); }
  cd xi(int link) const { return xis.at(link - 1); }
};

namespace detail {

/// arccos of the unit direction `from -> to` dotted with `axis`, in [0, π].
inline double direction_angle(const Vec3& from, const Vec3& to, const Vec3& axis) {
  const Vec3 dir = (to - from).normalized();
  return std::acos(std::clamp(dir.dot(axis), -1.0, 1.0));
}

}  // namespace detail

/// Builds every channel from geometry. The transmit and receive antennas are
/// colocated, so d4 = d1, d5 = d2 and the AoD of link 5 equals the AoA of link 2.
inline ChannelSet derive_channels(const ScenarioConfig& config) {
  config.validate();
  const Vec3 x_axis = Vec3::UnitX();
  const Vec3 y_axis = Vec3::UnitY();
  const double lambda = config.wavelength;
  const double kappa = 2.0 * kPi / lambda;

  ChannelSet ch;
  ch.num_ra = config.num_ra;
  ch.num_elements = config.num_elements();
  ch.wavelength = lambda;
  ch.spacing_ra = config.spacing_ra;
  const double d1 = (config.pos_user - config.pos_dfbs).norm();
  const double d2 = (config.pos_is - config.pos_dfbs).norm();
  const double d3 = (config.pos_user - config.pos_is).norm();
  ch.distances = {d1, d2, d3, d1, d2};
  ch.alphas = {path_loss(d1), path_loss(d2), path_loss(d3), 0.0, 0.0};
  ch.alphas[3] = ch.alphas[0];
  ch.alphas[4] = ch.alphas[1];

  // Each angle is seen from the array that measures it, toward the far end.
  ch.psi2_aoa = detail::direction_angle(config.pos_is, config.pos_dfbs, y_axis);
  ch.psi3_aod = detail::direction_angle(config.pos_is, config.pos_user, y_axis);
  ch.psi4_aoa = detail::direction_angle(config.pos_dfbs, config.pos_user, x_axis);
  ch.psi5_aoa = detail::direction_angle(config.pos_dfbs, config.pos_is, x_axis);
  ch.psi5_aod = ch.psi2_aoa;

  const double eps_r = config.spacing_ra;
  ch.xis[0] = std::polar(1.0, -kappa * d1) * std::polar(1.0, kappa * eps_r * std::cos(ch.psi4_aoa));
  ch.xis[1] = std::polar(1.0, -kappa * d2) * std::polar(1.0, kappa * eps_r * std::cos(ch.psi5_aoa));
  ch.xis[2] = std::polar(1.0, -kappa * d3);
  ch.xis[3] = std::polar(1.0, -kappa * d1);
  ch.xis[4] = std::polar(1.0, -kappa * d2);

  const int m = config.num_ra;
  auto xi_i = [&](double psi) {
    return steering_is(psi, config.ny, config.nz, lambda, config.spacing_is);
  };
  auto xi_r = [&](double psi) { return steering_ra(psi, m, lambda, eps_r); };

  ch.h1 = ch.alphas[0] * ch.xis[0];
  ch.h2 = ch.alphas[1] * ch.xis[1] * xi_i(ch.psi2_aoa);
  ch.h3 = ch.alphas[2] * ch.xis[2] * xi_i(ch.psi3_aod);
  ch.h4 = ch.alphas[3] * ch.xis[3] * xi_r(ch.psi4_aoa);
  ch.H5 = ch.alphas[4] * ch.xis[4] * xi_r(ch.psi5_aoa) * xi_i(ch.psi5_aod).transpose();
  return ch;
}

}  // namespace isstealth
