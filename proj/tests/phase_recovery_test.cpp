#include "test_util.hpp"

#include <gtest/gtest.h>

namespace isstealth {
namespace {

ScenarioConfig with_elements(int ny, int nz) {
  ScenarioConfig c;
  c.ny = ny;
  c.nz = nz;
  return c;
}

// Unit phasors ψn with θn = ψn · conj([ξ_I(ψ3)]n [ξ_I(ψ2)]n), undone here.
Eigen::VectorXcd auxiliary_phasors(const PhaseShiftVector& t, const ChannelSet& ch, const ScenarioConfig& c) {
  const Eigen::VectorXcd a3 = steering_is(ch.psi3_aod, c.ny, c.nz, c.wavelength, c.spacing_is);
  const Eigen::VectorXcd a2 = steering_is(ch.psi2_aoa, c.ny, c.nz, c.wavelength, c.spacing_is);
  return t.thetas.array() * a3.array() * a2.array();
}

TEST(RecoverPhases, BoundaryAlignsEveryElement) {
  const ScenarioConfig c;
  const ChannelSet ch = derive_channels(c);
  const double limit = c.num_elements() * ch.alpha(2) * ch.alpha(3);
  const cd nu = std::polar(limit, 0.8);
  const PhaseShiftVector t = recover_phases(nu, ch, c);
  const Eigen::VectorXcd psi = auxiliary_phasors(t, ch, c);
  // acos near 1 turns rounding of |s| into sqrt(eps) phase jitter, ν itself stays exact.
  for (Eigen::Index n = 1; n < psi.size(); ++n) EXPECT_NEAR(std::abs(psi(n) - psi(0)), 0.0, 1e-7);
  EXPECT_NEAR(std::abs(testing::direct_nu(ch, t.thetas, c) - nu), 0.0, 1e-9 * limit);
}

TEST(RecoverPhases, ZeroTargetCancelsPairwise) {
  const ScenarioConfig c;
  const ChannelSet ch = derive_channels(c);
  const PhaseShiftVector t = recover_phases({0.0, 0.0}, ch, c);
  const Eigen::VectorXcd psi = auxiliary_phasors(t, ch, c);
  for (Eigen::Index n = 0; n + 1 < psi.size(); n += 2) EXPECT_NEAR(std::abs(psi(n) + psi(n + 1)), 0.0, 1e-12);
  const double limit = c.num_elements() * ch.alpha(2) * ch.alpha(3);
  EXPECT_NEAR(std::abs(testing::direct_nu(ch, t.thetas, c)), 0.0, 1e-12 * limit);
}

class RoundTrip : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(RoundTrip, ReconstructsTarget) {
  const auto [ny, nz] = GetParam();
  const ScenarioConfig c = with_elements(ny, nz);
  const ChannelSet ch = derive_channels(c);
  const double limit = c.num_elements() * ch.alpha(2) * ch.alpha(3);
  std::mt19937_64 rng(41 + ny * nz);
  for (int trial = 0; trial < 300; ++trial) {
    // Mix uniform draws with the small-|ν| and near-boundary regimes.
    cd nu = testing::random_in_disk(rng, limit);
    if (trial % 10 == 1) nu *= 1e-3 / c.num_elements();
    if (trial % 10 == 2) nu = std::polar(limit * (1.0 - 1e-12), std::arg(nu));
    const PhaseShiftVector t = recover_phases(nu, ch, c);
    ASSERT_EQ(t.size(), c.num_elements());
    EXPECT_LE(t.max_modulus_error(), 1e-12);
    EXPECT_LE(std::abs(testing::direct_nu(ch, t.thetas, c) - nu), 1e-9 * limit) << "trial " << trial;
  }
}

INSTANTIATE_TEST_SUITE_P(Parities, RoundTrip,
                         ::testing::Values(std::pair{30, 10}, std::pair{299, 1}, std::pair{3, 1},
                                           std::pair{2, 1}, std::pair{7, 3}));

TEST(RecoverPhases, OddSizeSmallTargets) {
  const ScenarioConfig c = with_elements(5, 1);
  const ChannelSet ch = derive_channels(c);
  const double unit = ch.alpha(2) * ch.alpha(3);
  for (double mag : {0.0, 0.1, 0.49, 0.5, 0.51, 3.99, 4.0, 4.5, 5.0}) {
    const cd nu = std::polar(mag * unit, 1.3);
    const PhaseShiftVector t = recover_phases(nu, ch, c);
    EXPECT_LE(t.max_modulus_error(), 1e-12) << mag;
    EXPECT_LE(std::abs(testing::direct_nu(ch, t.thetas, c) - nu), 1e-9 * 5.0 * unit) << mag;
  }
}

TEST(RecoverPhases, RejectsOutOfRange) {
  const ScenarioConfig c;
  const ChannelSet ch = derive_channels(c);
  const double limit = c.num_elements() * ch.alpha(2) * ch.alpha(3);
  EXPECT_THROW(recover_phases({1.01 * limit, 0.0}, ch, c), std::out_of_range);
}

TEST(RecoverPhases, SingleElementOnlyReachesItsGain) {
  const ScenarioConfig c = with_elements(1, 1);
  const ChannelSet ch = derive_channels(c);
  const double unit = ch.alpha(2) * ch.alpha(3);
  const cd nu = std::polar(unit, -0.4);
  EXPECT_NEAR(std::abs(testing::direct_nu(ch, recover_phases(nu, ch, c).thetas, c) - nu), 0.0, 1e-9 * unit);
  EXPECT_THROW(recover_phases(0.5 * nu, ch, c), std::out_of_range);
}

TEST(ApplyPhaseShifts, MatchesSubstitutionIdentities) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const ScenarioConfig c = testing::random_scenario(rng);
    const ChannelSet ch = derive_channels(c);
    const double limit = c.num_elements() * ch.alpha(2) * ch.alpha(3);
    const cd nu = testing::random_in_disk(rng, limit);
    const EffectiveChannels eff = apply_phase_shifts(recover_phases(nu, ch, c), ch);
    const cd comm = ch.h1 + ch.xi(2) * nu;
    EXPECT_NEAR(std::abs(eff.comm - comm), 0.0, 1e-9 * std::abs(comm));
    const Eigen::VectorXcd radar =
        ch.h4 + ch.xi(5) * steering_ra(ch.psi5_aoa, c.num_ra, c.wavelength, c.spacing_ra) * nu;
    EXPECT_LE((eff.radar - radar).norm(), 1e-9 * radar.norm());
  }
}

TEST(ApplyPhaseShifts, ZeroReflectionLeavesDirectLink) {
  const ScenarioConfig c;
  const ChannelSet ch = derive_channels(c);
  const EffectiveChannels eff = apply_phase_shifts(recover_phases({0.0, 0.0}, ch, c), ch);
  EXPECT_NEAR(std::abs(eff.comm - ch.h1), 0.0, 1e-12 * std::abs(ch.h1));
  EXPECT_LE((eff.radar - ch.h4).norm(), 1e-12 * ch.h4.norm());
}

TEST(ApplyPhaseShifts, RejectsWrongLength) {
  const ScenarioConfig c;
  const ChannelSet ch = derive_channels(c);
  PhaseShiftVector t{Eigen::VectorXcd::Ones(7)};
  EXPECT_THROW(apply_phase_shifts(t, ch), std::invalid_argument);
}

// Realized Θ from solve_min keeps the link above the floor and reproduces the
// expanded utility.
TEST(RecoverPhases, SolverOutputComposes) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> enh(0.0, 6.0);
  for (int trial = 0; trial < 40; ++trial) {
    ScenarioConfig c = testing::random_scenario(rng);
    c.snr_floor = baseline_snr(c) * db_to_linear(enh(rng));
    const ChannelSet ch = derive_channels(c);
    const NuProblem p = build_problem(ch, c, ch.psi4_aoa);
    if (!p.nonempty()) continue;
    const NuSolution s = solve_min(p);
    const PhaseShiftVector t = recover_phases(s.nu, ch, c);
    const EffectiveChannels eff = apply_phase_shifts(t, ch);
    EXPECT_GE(c.tx_power / c.noise_power * std::norm(eff.comm), c.snr_floor * (1.0 - 1e-9));
    const Eigen::VectorXcd a4 = steering_ra(ch.psi4_aoa, c.num_ra, c.wavelength, c.spacing_ra);
    const double composed = std::norm(eff.radar.dot(a4));
    EXPECT_NEAR(composed, objective_quadratic(s.nu, p), 1e-9 * composed);
  }
}

}  // namespace
}  // namespace isstealth
