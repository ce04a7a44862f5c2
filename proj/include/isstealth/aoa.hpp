#pragma once

// Grid-search AoA machinery shared by the asymptotic and Monte Carlo estimators.

#include "isstealth/scenario.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace isstealth {

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// |psi_hat - psi_true| in degrees.
inline double angle_error_deg(double psi_hat, double psi_true) {
  return std::abs(psi_hat - psi_true) * 180.0 / kPi;
}

/// Uniform search grid over [0, π]: points k·step for k = 0..size-1.
class AngleGrid {
 public:
  explicit AngleGrid(double step) : step_(step) {
    if (!(step > 0.0)) throw std::invalid_argument("AngleGrid: step must be positive");
    const auto n = static_cast<std::size_t>(std::floor(kPi / step + 1e-9)) + 1;
    points_.resize(n);
    for (std::size_t k = 0; k < n; ++k) points_[k] = static_cast<double>(k) * step;
  }

  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t k) const { return points_[k]; }
  const std::vector<double>& points() const noexcept { return points_; }

 private:
  double step_;
  std::vector<double> points_;
};

namespace detail {

inline std::size_t argmax(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[best]) best = k;
  return best;
}

/// One parabolic step on log(metric) around grid index k, clamped to half a cell
/// and to [0, π]. Edge points and non-positive neighbours are left unrefined.
inline double refine_peak(const AngleGrid& grid, const std::vector<double>& values, std::size_t k) {
  const double psi = grid[k];
  if (k == 0 || k + 1 >= values.size()) return psi;
  const double lo = values[k - 1], mid = values[k], hi = values[k + 1];
  if (!(lo > 0.0 && mid > 0.0 && hi > 0.0)) return psi;
  const double ym = std::log(lo), y0 = std::log(mid), yp = std::log(hi);
  const double curvature = ym - 2.0 * y0 + yp;
  if (!(curvature < 0.0)) return psi;
  const double offset = std::clamp(0.5 * (ym - yp) / curvature, -0.5, 0.5);
  return std::clamp(psi + offset * grid.step(), 0.0, kPi);
}

}  // namespace detail

/// Law-of-large-numbers limit of the ML metric,
///   f(ψ') = |h4ᴴ ξ_R(ψ') + ξ5* ν* ξ_R(ψ5)ᴴ ξ_R(ψ')|²,
/// tabulated once per channel set so that many ν can be scored cheaply.
class AsymptoticAoaMetric {
 public:
  AsymptoticAoaMetric(const ChannelSet& ch, double grid_step) : grid_(grid_step) {
    const std::size_t n = grid_.size();
    direct_re_.resize(n);
    direct_im_.resize(n);
    refl_re_.resize(n);
    refl_im_.resize(n);
    const Eigen::VectorXcd a5 = steering_ra(ch.psi5_aoa, ch.num_ra, ch.wavelength, ch.spacing_ra);
    const cd xi5c = std::conj(ch.xi(5));
    for (std::size_t k = 0; k < n; ++k) {
      const Eigen::VectorXcd probe = steering_ra(grid_[k], ch.num_ra, ch.wavelength, ch.spacing_ra);
      const cd direct = ch.h4.dot(probe);  // Eigen's dot conjugates the left operand
      const cd refl = xi5c * a5.dot(probe);
      direct_re_[k] = direct.real();
      direct_im_[k] = direct.imag();
      refl_re_[k] = refl.real();
      refl_im_[k] = refl.imag();
    }
  }

  const AngleGrid& grid() const noexcept { return grid_; }

  /// Metric on every grid point for a given ν.
  void evaluate(cd nu, std::vector<double>& out) const {
    const std::size_t n = grid_.size();
    out.resize(n);
    const double qr = nu.real(), qi = -nu.imag();
    for (std::size_t k = 0; k < n; ++k) {
      const double re = direct_re_[k] + qr * refl_re_[k] - qi * refl_im_[k];
      const double im = direct_im_[k] + qr * refl_im_[k] + qi * refl_re_[k];
      out[k] = re * re + im * im;
    }
  }

  /// Refined argmax of the metric.
  double estimate(cd nu) const {
    thread_local std::vector<double> buffer;
    evaluate(nu, buffer);
    return detail::refine_peak(grid_, buffer, detail::argmax(buffer));
  }

 private:
  AngleGrid grid_;
  std::vector<double> direct_re_, direct_im_, refl_re_, refl_im_;
};

/// AoA the DFBS converges to when the surface aggregates to ν.
inline double asymptotic_aoa(const ChannelSet& ch, cd nu, double grid_step) {
  return AsymptoticAoaMetric(ch, grid_step).estimate(nu);
}

}  // namespace isstealth
