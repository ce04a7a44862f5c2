#pragma once

// Unit-modulus reflection coefficients realizing a target aggregate ν.
//
// With θn = sn · conj([ξ_I(ψ3)]n [ξ_I(ψ2)]n) the aggregate collapses to
// ν = α2 α3 ξ3 Σ sn, so it suffices to split s = ν / (α2 α3 ξ3), |s| <= N, into
// N unit phasors. Pairs (e^{j(∠s+γ)}, 2s/N - e^{j(∠s+γ)}) with cos γ = |s|/N each
// contribute 2s/N and both have unit modulus. Odd N peels one element first.

#include "isstealth/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace isstealth {

struct PhaseShiftVector {
  Eigen::VectorXcd thetas;

  Eigen::Index size() const noexcept { return thetas.size(); }
  /// Largest deviation of |θn| from 1.
  double max_modulus_error() const {
    double e = 0.0;
    for (Eigen::Index n = 0; n < thetas.size(); ++n) e = std::max(e, std::abs(std::abs(thetas(n)) - 1.0));
    return e;
  }
};

namespace detail {

/// Fills `out[first .. first+count)` with unit phasors summing to `target`.
/// `count` must be even and |target| <= count.
inline void split_even(cd target, Eigen::Index first, Eigen::Index count, Eigen::VectorXcd& out) {
  const double n = static_cast<double>(count);
  const double ratio = std::min(std::abs(target) / n, 1.0);
  const cd lead = std::polar(1.0, std::arg(target) + std::acos(ratio));
  const cd partner = 2.0 * target / n - lead;
  // Element numbering is 1-based: even n gets `lead`, odd n gets `partner`.
  for (Eigen::Index k = 0; k < count; ++k) out(first + k) = (k % 2 == 1) ? lead : partner;
}

}  // namespace detail

/// Surface coefficients θ with α2 h3ᵀ diag(θ) ξ_I(ψ2) = ν.
/// Throws std::out_of_range when |ν| exceeds N α2 α3 (beyond a 1e-9 relative
/// slack for boundary solutions) or, for N = 1, when |ν| differs from α2 α3.
inline PhaseShiftVector recover_phases(cd nu, const ChannelSet& ch, const ScenarioConfig& config) {
  const Eigen::Index n_el = config.num_elements();
  const double gain = ch.alpha(2) * ch.alpha(3);
  const double limit = static_cast<double>(n_el) * gain;
  if (std::abs(nu) > limit * (1.0 + 1e-9))
    throw std::out_of_range("recover_phases: |nu| exceeds N*alpha2*alpha3");

  cd s = nu / (gain * ch.xi(3));
  if (std::abs(s) > static_cast<double>(n_el)) s *= static_cast<double>(n_el) / std::abs(s);

  Eigen::VectorXcd psi(n_el);
  if (n_el % 2 == 0) {
    detail::split_even(s, 0, n_el, psi);
  } else if (n_el == 1) {
    if (std::abs(std::abs(s) - 1.0) > 1e-9)
      throw std::out_of_range("recover_phases: a single element only reaches |nu| = alpha2*alpha3");
    psi(0) = std::polar(1.0, std::arg(s));
  } else {
    const double mag = std::abs(s);
    const double rest = static_cast<double>(n_el - 1);
    cd last;
    if (mag > rest || mag < 0.5) {
      // Align the last element with s. For |s| < 1/2 the rotated choice below
      // is undefined; the residual then has modulus 1 - |s| <= N - 1.
      last = std::polar(1.0, std::arg(s));
    } else {
      // Rotated so that |s - last| = |s|.
      last = std::polar(1.0, std::arg(s) + std::acos(1.0 / (2.0 * mag)));
    }
    psi(n_el - 1) = last;
    detail::split_even(s - last, 0, n_el - 1, psi);
  }

  const Eigen::VectorXcd a3 = steering_is(ch.psi3_aod, config.ny, config.nz, config.wavelength, config.spacing_is);
  const Eigen::VectorXcd a2 = steering_is(ch.psi2_aoa, config.ny, config.nz, config.wavelength, config.spacing_is);
  PhaseShiftVector out;
  out.thetas = psi.array() * (a3.array() * a2.array()).conjugate();
  return out;
}

/// Aggregate ν actually produced by θ: α2 h3ᵀ diag(θ) ξ_I(ψ2).
inline cd realized_nu(const PhaseShiftVector& theta, const ChannelSet& ch, const ScenarioConfig& config) {
  const Eigen::VectorXcd a2 = steering_is(ch.psi2_aoa, config.ny, config.nz, config.wavelength, config.spacing_is);
  return ch.alpha(2) * (ch.h3.array() * theta.thetas.array() * a2.array()).sum();
}

struct EffectiveChannels {
  cd comm;                 ///< h1 + h3ᵀ Θ h2
  Eigen::VectorXcd radar;  ///< h4 + H5 Θ h3
};

inline EffectiveChannels apply_phase_shifts(const PhaseShiftVector& theta, const ChannelSet& ch) {
  if (theta.size() != ch.h3.size() || theta.size() != ch.h2.size() || theta.size() != ch.H5.cols())
    throw std::invalid_argument("apply_phase_shifts: theta length does not match the surface size");
  const Eigen::VectorXcd reflected = theta.thetas.cwiseProduct(ch.h3);
  EffectiveChannels e;
  e.comm = ch.h1 + (ch.h2.array() * reflected.array()).sum();
  e.radar = ch.h4 + ch.H5 * reflected;
  return e;
}

}  // namespace isstealth
