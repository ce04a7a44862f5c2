#pragma once

// Shared generators and brute-force reference computations for the tests.
// Nothing here calls into the closed-form paths it is used to check.

#include "isstealth/isstealth.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace isstealth::testing {

inline cd random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  return std::polar(1.0, phase(rng));
}

/// Uniform point of the disk |z| <= radius.
inline cd random_in_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(radius * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

/// Random feasible reduced problem with O(1) scales. The unconstrained
/// minimizer -b/a lands anywhere within twice the outer radius, so interior,
/// outer-boundary and forbidden-circle optima all occur.
inline NuProblem random_problem(std::mt19937_64& rng, int num_ra = 4) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  NuProblem p;
  p.a = (1.0 - u(rng)) * num_ra * num_ra;  // (0, M²]
  p.outer_radius = 0.5 + 1.5 * u(rng);
  const cd center = random_in_disk(rng, 2.0 * p.outer_radius);
  p.b = -center * p.a;
  p.const0 = u(rng);
  p.h1 = random_in_disk(rng, 2.0 * p.outer_radius);
  p.xi2 = random_unit(rng);
  p.forbidden_radius = u(rng) * (std::abs(p.h1) + p.outer_radius);
  return p;
}

/// Direct matrix evaluation of |(h4 + H5Θh3)ᴴ ξ_R(probe)|².
inline double direct_utility(const ChannelSet& ch, const Eigen::VectorXcd& theta, const ScenarioConfig& c,
                             double probe) {
  const Eigen::VectorXcd radar = ch.h4 + ch.H5 * theta.asDiagonal() * ch.h3;
  const Eigen::VectorXcd ap = steering_ra(probe, c.num_ra, c.wavelength, c.spacing_ra);
  return std::norm(radar.dot(ap));
}

/// ν realized by an arbitrary Θ, straight from the definition α2 h3ᵀ Θ ξ_I(ψ2).
inline cd direct_nu(const ChannelSet& ch, const Eigen::VectorXcd& theta, const ScenarioConfig& c) {
  const Eigen::VectorXcd a2 = steering_is(ch.psi2_aoa, c.ny, c.nz, c.wavelength, c.spacing_is);
  cd acc{0.0, 0.0};
  for (Eigen::Index n = 0; n < theta.size(); ++n) acc += ch.h3(n) * theta(n) * a2(n);
  return ch.alpha(2) * acc;
}

inline Eigen::VectorXcd random_theta(std::mt19937_64& rng, int n) {
  Eigen::VectorXcd t(n);
  for (int i = 0; i < n; ++i) t(i) = random_unit(rng);
  return t;
}

/// Random scenario around the reference deployment.
inline ScenarioConfig random_scenario(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScenarioConfig c;
  c.pos_is = Vec3(15.0 * u(rng), 15.0 * u(rng), 2.0 * u(rng));
  c.pos_user = Vec3(5.0 + 4.0 * u(rng), -5.0 + 4.0 * u(rng), u(rng));
  c.ny = 2 + static_cast<int>(std::floor(10.0 * (u(rng) + 1.0)));
  c.nz = 1 + static_cast<int>(std::floor(2.5 * (u(rng) + 1.0)));
  c.num_ra = 2 + static_cast<int>(std::floor(3.0 * (u(rng) + 1.0)));
  return c;
}

}  // namespace isstealth::testing
