#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qfield/verify.hpp"

using namespace qfield;

namespace {

const ModeId kL1{Direction::L, Polarization::One, 0};

std::vector<double> window(double start, double stop, std::size_t n) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(start + (stop - start) * i / (n - 1));
  return out;
}

}  // namespace

TEST(ResidualReportTest, PassRequiresToleranceAndOrder) {
  ResidualReport r;
  r.max_abs_residual = 1e-6;
  r.normalization = 2.0;
  r.tolerance = 1e-6;
  EXPECT_TRUE(r.finalize().pass);
  r.min_order = 1.9;
  r.order = 1.5;
  EXPECT_FALSE(r.finalize().pass);
  r.order = std::nullopt;
  EXPECT_TRUE(r.finalize().pass);
  r.normalization = 0.0;
  r.max_abs_residual = 0.0;
  EXPECT_TRUE(r.finalize().pass);
  EXPECT_EQ(r.normalization, 1.0);
}

TEST(FitOrderTest, RecoversPowerLawAndDetectsRoundoff) {
  const std::vector<double> h{0.1, 0.05, 0.025};
  EXPECT_NEAR(*fit_order(h, {3e-2, 7.5e-3, 1.875e-3}), 2.0, 1e-12);
  EXPECT_NEAR(*fit_order(h, {1e-3, 5e-4, 2.5e-4}), 1.0, 1e-12);
  EXPECT_FALSE(fit_order(h, {1e-3, 1e-16, 1e-17}).has_value());
  EXPECT_THROW(fit_order({0.1}, {1.0}), std::invalid_argument);
}

TEST(LadderAlgebraCheck, TwoModeSpace) {
  const auto r = check_ladder_algebra(make_plain_universe(2), 5, {0, 1}, 100, 7);
  EXPECT_TRUE(r.pass) << r.max_abs_residual;
  EXPECT_LE(r.max_abs_residual, 1e-12);
}

TEST(SpectrumCheck, EightFrequencies) {
  const auto r = check_spectrum(make_universe(FrequencyGrid(1.0, 1.0, 8)), Medium::natural(), 4);
  EXPECT_TRUE(r.pass) << r.max_abs_residual;
  const auto si = check_spectrum(make_universe(FrequencyGrid(1e15, 1e13, 8)), Medium::si_vacuum(), 4);
  EXPECT_TRUE(si.pass) << si.max_abs_residual;
}

TEST(ModeOdeCheck, PassesAndFlippedBranchFails) {
  const Field1D field(Medium(1.5, 1.2, 1.0, 1.0), FrequencyGrid(1.0, 1.0, 4));
  const auto good = check_mode_ode(field, 1000, 20.0, false);
  EXPECT_TRUE(good.pass) << good.max_abs_residual;
  ASSERT_TRUE(good.order.has_value());
  EXPECT_NEAR(*good.order, 2.0, 0.02);
  const auto bad = check_mode_ode(field, 1000, 20.0, true);
  EXPECT_FALSE(bad.pass);
  EXPECT_GT(bad.max_abs_residual, 1.0);
}

TEST(Maxwell1dCheck, VacuumIsExactlyZero) {
  const Field1D field(Medium::natural(), FrequencyGrid(1.0, 1.0, 1));
  const auto r = check_maxwell_1d(vacuum(field.universe(), 2), field, {0.0, 1.0}, {0.0}, 1e-2, 0.9);
  EXPECT_EQ(r.faraday.max_abs_residual, 0.0);
  EXPECT_TRUE(r.faraday.pass);
  EXPECT_TRUE(r.ampere.pass);
  EXPECT_FALSE(r.faraday.order.has_value());
}

TEST(Maxwell1dCheck, LeftCoherentMatchesErrorModel) {
  const Field1D field(Medium::natural(), FrequencyGrid(1.0, 1.0, 1));
  const auto psi = coherent_state(field, 40, {{kL1, Complex(1.0, 0.0)}});
  const auto xs = window(0.0, 2.0 * std::numbers::pi, 9);
  const double courant = 0.9;
  const auto r = check_maxwell_1d(psi, field, xs, {0.0, 0.37}, 1e-2, courant);
  for (const auto* rep : {&r.faraday, &r.ampere}) {
    EXPECT_TRUE(rep->pass) << rep->check << " " << rep->relative();
    ASSERT_TRUE(rep->order.has_value());
    EXPECT_GE(*rep->order, 1.9);
    const double kh = 2.0 * std::numbers::pi * 2.5e-3;
    EXPECT_NEAR(rep->relative(), kh * kh / 6.0 * (1.0 - courant * courant), 2e-8);
  }
}

TEST(Maxwell1dCheck, MagicTimeStepLeavesOnlyRoundoff) {
  const Field1D field(Medium::natural(), FrequencyGrid(1.0, 1.0, 1));
  const auto psi = coherent_state(field, 40, {{kL1, Complex(1.0, 0.0)}});
  const auto r = check_maxwell_1d(psi, field, {0.0, 1.0, 2.0}, {0.0}, 1e-2, 1.0);
  EXPECT_LE(r.faraday.relative(), 1e-11);
  EXPECT_FALSE(r.faraday.order.has_value());
}

TEST(Maxwell1dCheck, MixedDirectionsInMedium) {
  const Field1D field(Medium(2.0, 1.5, 1.0, 1.0), FrequencyGrid(0.5, 0.5, 3));
  const auto psi = coherent_state(field, 30, {{ModeId{Direction::L, Polarization::One, 1}, Complex(0.8, 0.0)},
                                              {ModeId{Direction::R, Polarization::Two, 2}, Complex(0.0, 0.6)},
                                              {ModeId{Direction::R, Polarization::One, 0}, Complex(0.3, 0.3)}});
  const auto r = check_maxwell_1d(psi, field, window(-1.0, 3.0, 7), {0.0, 0.5}, 1e-2, 0.9);
  EXPECT_TRUE(r.faraday.pass) << r.faraday.relative();
  EXPECT_TRUE(r.ampere.pass) << r.ampere.relative();
  EXPECT_GE(*r.faraday.order, 1.9);
}

TEST(HeisenbergCheck, NumberStatesAreStationary) {
  const Field1D field(Medium::natural(), FrequencyGrid(1.0, 1.0, 2));
  const auto r = check_heisenberg(number_state(field.universe(), 3, 2, 2), field, {0.0, 0.5}, 0.3, 1e-2);
  EXPECT_EQ(r.max_abs_residual, 0.0);
  EXPECT_TRUE(r.pass);
  EXPECT_THROW(check_heisenberg(vacuum(field.universe(), 3), field, {0.0}, 0.0, 0.0), std::invalid_argument);
}

TEST(HeisenbergCheck, CoherentAndSuperpositionConverge) {
  const Field1D field(Medium(1.2, 1.0, 1.0, 1.0), FrequencyGrid(1.0, 1.0, 3));
  const auto coherent = coherent_state(field, 30, {{ModeId{Direction::R, Polarization::Two, 2}, Complex(1.0, 0.5)}});
  const auto u = field.universe();
  const auto sup = normalized(superpose(superpose(vacuum(u, 3), number_state(u, 3, 1, 1)),
                                        scaled(number_state(u, 3, 7, 2), Complex(0.3, 0.4))));
  for (const auto* psi : {&coherent, &sup}) {
    const auto r = check_heisenberg(*psi, field, {0.0, 0.4, 1.7}, 0.25, 1e-2);
    EXPECT_TRUE(r.pass) << r.relative();
    ASSERT_TRUE(r.order.has_value());
    EXPECT_GE(*r.order, 1.9);
    EXPECT_LE(*r.order, 2.1);
  }
}

TEST(EnergyEquivalenceCheck, StatesOnEightFrequencyGrid) {
  const Field1D field(Medium::natural(), FrequencyGrid(1.0, 1.0, 8));
  const auto u = field.universe();
  const auto vac_plus_one = normalized(superpose(vacuum(u, 3), number_state(u, 3, 5, 1)));
  const auto three = basis_state(u, 3, OccupationTuple({{0, 1}, {12, 1}, {27, 1}}));
  const auto coherent = coherent_state(field, 20, {{kL1, Complex(1.0, 0.0)}});
  for (const auto* psi : {&vac_plus_one, &three, &coherent}) {
    const auto r = check_energy_equivalence(*psi, field);
    EXPECT_TRUE(r.excitation.pass) << r.excitation.relative();
    EXPECT_TRUE(r.zero_point.pass) << r.zero_point.relative();
  }
  const auto vac = check_energy_equivalence(vacuum(u, 2), field);
  EXPECT_LE(vac.zero_point.relative(), 1e-10);
  EXPECT_EQ(vac.excitation.max_abs_residual, 0.0);
}

TEST(EnergyEquivalenceCheck, MediumAndOffsetGrid) {
  const Field1D field(Medium(2.5, 1.7, 1.0, 0.3), FrequencyGrid(1.5, 0.5, 4));
  const auto psi = coherent_state(field, 20, {{ModeId{Direction::R, Polarization::Two, 3}, Complex(0.7, -0.2)},
                                              {ModeId{Direction::L, Polarization::One, 1}, Complex(0.1, 0.5)}});
  const auto r = check_energy_equivalence(psi, field);
  EXPECT_TRUE(r.excitation.pass) << r.excitation.relative();
  EXPECT_TRUE(r.zero_point.pass) << r.zero_point.relative();
}

TEST(EnergyEquivalenceCheck, ScaledAmplitudeIsDetected) {
  const FrequencyGrid grid(1.0, 1.0, 8);
  const Field1D scaled_field(Medium::natural(), grid, {}, 1.01);
  const auto psi = number_state(scaled_field.universe(), 2, 3, 1);
  const auto r = check_energy_equivalence(psi, scaled_field);
  EXPECT_FALSE(r.excitation.pass);
  EXPECT_NEAR(r.excitation.relative(), 1.01 * 1.01 - 1.0, 1e-10);
}

TEST(EnergyEquivalenceCheck, IncommensurateGridRejected) {
  const Field1D field(Medium::natural(), FrequencyGrid(1.25, 1.0, 2));
  EXPECT_THROW(check_energy_equivalence(vacuum(field.universe(), 2), field), std::invalid_argument);
}

TEST(DirectionCheck, LeftAndRightMovers) {
  const Field1D field(Medium(3.0, 1.0, 1.0, 1.0), FrequencyGrid(0.5, 0.5, 4));
  const auto left = coherent_state(field, 25, {{ModeId{Direction::L, Polarization::One, 0}, Complex(1.0, 0.0)},
                                               {ModeId{Direction::L, Polarization::Two, 3}, Complex(0.2, 0.4)}});
  const auto right = coherent_state(field, 25, {{ModeId{Direction::R, Polarization::One, 2}, Complex(0.0, 1.0)}});
  EXPECT_TRUE(check_direction(left, field, {0.0, 1.0, 2.5}, {0.1, 0.9, 3.0}, 0.2).pass);
  EXPECT_TRUE(check_direction(right, field, {0.0, 1.0, 2.5}, {0.1, 0.9, 3.0}, 0.2).pass);
  const auto both = coherent_state(field, 25, {{ModeId{Direction::L, Polarization::One, 0}, Complex(1.0, 0.0)},
                                               {ModeId{Direction::R, Polarization::One, 0}, Complex(1.0, 0.0)}});
  EXPECT_THROW(check_direction(both, field, {0.0}, {0.1}, 0.0), std::invalid_argument);
}

TEST(CoherentStateCheck, TruncationBelowBudgetFails) {
  const auto u = make_universe(FrequencyGrid(1.0, 1.0, 1));
  EXPECT_TRUE(check_coherent_state(u, 20, {{0, Complex(1.0, 0.0)}}).pass);
  const auto r = check_coherent_state(u, 3, {{0, Complex(1.0, 0.0)}});
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.params.at("cap_population"), 0.0);
}

TEST(ThreeDimensionalChecks, PolarizationDivergenceCurlEnergy) {
  EXPECT_TRUE(check_polarization_3d(500, 3).pass);
  const Field3D field(Medium(1.0, 1.5, 1.0, 1.0), KGrid(0.5, 2));
  const std::size_t m = field.grid().index_of(LatticeMode{{2, 1, 0}, Polarization::Two});
  const auto psi = coherent_state(field.universe(), 2, {{m, Complex(0.02, 0.01)}});
  const std::vector<Vec3> pts{{0.0, 0.0, 0.0}, {0.4, -0.3, 1.1}, {2.0, 1.0, -0.5}};
  const auto div = check_divergence_3d(psi, field, pts, 0.2, 1e-2);
  EXPECT_TRUE(div.pass) << div.relative();
  ASSERT_TRUE(div.order.has_value());
  EXPECT_NEAR(*div.order, 2.0, 0.05);
  const auto curl = check_curl_3d(psi, field, pts, 0.2, 1e-2, 0.5);
  EXPECT_TRUE(curl.pass) << curl.relative();
  ASSERT_TRUE(curl.order.has_value());
  EXPECT_GE(*curl.order, 1.9);
  const auto energy = check_energy_3d(number_state(field.universe(), 2, m, 1), field, 12);
  EXPECT_TRUE(energy.excitation.pass) << energy.excitation.relative();
  EXPECT_TRUE(energy.zero_point.pass) << energy.zero_point.relative();
}
