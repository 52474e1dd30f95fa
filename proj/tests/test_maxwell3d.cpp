#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qfield/maxwell3d.hpp"
#include "qfield/random.hpp"

using namespace qfield;

namespace {

std::size_t mode_index(const KGrid& grid, LatticePoint k, Polarization p) { return grid.index_of(LatticeMode{k, p}); }

std::vector<Vec3> sample_points() {
  return {{0.0, 0.0, 0.0}, {0.3, -0.2, 0.7}, {1.1, 0.4, -0.5}, {-0.8, 1.3, 0.2}};
}

}  // namespace

TEST(PolarizationBasis, PoleRule) {
  const auto [e1, e2] = polarization_basis({0.0, 0.0, 5.0});
  EXPECT_EQ(e1, (Vec3{1.0, 0.0, 0.0}));
  EXPECT_EQ(e2, (Vec3{0.0, 1.0, 0.0}));
  const auto [f1, f2] = polarization_basis({0.0, 0.0, -2.0});
  EXPECT_EQ(f1, (Vec3{1.0, 0.0, 0.0}));
  EXPECT_NEAR(f2[1], -1.0, 1e-15);
}

TEST(PolarizationBasis, AxisAlongX) {
  // x̂ × ẑ = -ŷ; e2 = x̂ × (-ŷ) = -ẑ completes a right-handed triple with k̂.
  const auto [e1, e2] = polarization_basis({3.0, 0.0, 0.0});
  EXPECT_NEAR(e1[0], 0.0, 1e-16);
  EXPECT_NEAR(e1[1], -1.0, 1e-16);
  EXPECT_NEAR(e1[2], 0.0, 1e-16);
  EXPECT_NEAR(e2[2], -1.0, 1e-16);
  EXPECT_NEAR(dot(cross(e1, e2), Vec3{1.0, 0.0, 0.0}), 1.0, 1e-15);
}

TEST(PolarizationBasis, RandomDirectionsOrthonormalTransverse) {
  Rng rng(500);
  for (int trial = 0; trial < 500; ++trial) {
    const Vec3 k{rng.normal(), rng.normal(), rng.normal()};
    const auto [e1, e2] = polarization_basis(k);
    const Vec3 k_hat = normalize(k);
    EXPECT_NEAR(dot(e1, e1), 1.0, 1e-13);
    EXPECT_NEAR(dot(e2, e2), 1.0, 1e-13);
    EXPECT_NEAR(dot(e1, e2), 0.0, 1e-13);
    EXPECT_NEAR(dot(k_hat, e1), 0.0, 1e-13);
    EXPECT_NEAR(dot(k_hat, e2), 0.0, 1e-13);
    EXPECT_NEAR(dot(cross(e1, e2), k_hat), 1.0, 1e-13);
    EXPECT_EQ(polarization_basis(k), polarization_basis(k));
  }
  EXPECT_THROW(polarization_basis({0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(KGridTest, SizeSymmetryAndIndexing) {
  const KGrid grid(0.5, 2);
  EXPECT_EQ(grid.points().size(), 124u);
  EXPECT_EQ(grid.mode_count(), 248u);
  EXPECT_NEAR(grid.box_length(), 4.0 * std::numbers::pi, 1e-15);
  EXPECT_FALSE(grid.contains({0, 0, 0}));
  EXPECT_FALSE(grid.contains({3, 0, 0}));
  for (std::size_t i = 0; i < grid.mode_count(); ++i) {
    const LatticeMode mode = grid.mode_at(i);
    EXPECT_EQ(grid.index_of(mode), i);
    EXPECT_TRUE(grid.contains({-mode.k[0], -mode.k[1], -mode.k[2]}));
  }
  EXPECT_THROW(KGrid(0.0, 1), std::invalid_argument);
  EXPECT_THROW(KGrid(1.0, 0), std::invalid_argument);
}

TEST(KGridTest, UniverseFrequenciesFollowDispersion) {
  const Medium md(2.0, 2.0, 1.0, 1.0);
  const KGrid grid(0.5, 1);
  const auto u = make_universe(grid, md);
  ASSERT_EQ(u->size(), grid.mode_count());
  for (std::size_t i = 0; i < u->size(); ++i) {
    EXPECT_NEAR(u->omega(i), length(grid.wavevector(grid.mode_at(i).k)) / 2.0, 1e-15);
    EXPECT_EQ(u->find(lattice_label(grid.mode_at(i))), i);
  }
  EXPECT_EQ(lattice_label(LatticeMode{{1, 0, -1}, Polarization::One}), "λ1@k=(1,0,-1)");
}

TEST(Commutator3D, KroneckerDelta) {
  const KGrid grid(1.0, 1);
  const auto u = make_universe(grid, Medium::natural());
  Rng rng(20);
  const std::vector<std::size_t> modes{0, 1, 17, 51};
  for (int trial = 0; trial < 10; ++trial) {
    const auto probe = random_state(u, 2, modes, 1, rng);
    for (std::size_t a : modes) {
      for (std::size_t b : modes) {
        const Complex c = commutator_test(a, b, probe);
        EXPECT_LT(std::abs(c - (a == b ? Complex(1.0) : Complex(0.0))), 1e-12);
      }
    }
  }
}

TEST(Field3DTest, VacuumAndMagneticRatio) {
  const Medium md(1.5, 1.2, 1.0, 1.0);
  const Field3D field(md, KGrid(0.5, 2));
  const auto vac = vacuum(field.universe(), 2);
  const auto s = field_expectation_3d(vac, {0.1, 0.2, 0.3}, 0.4, field, true);
  EXPECT_EQ(s.e_field, (Vec3{0, 0, 0}));
  EXPECT_EQ(s.b_field, (Vec3{0, 0, 0}));
  EXPECT_NEAR(*s.e_sq, field.vacuum_e_sq(), 1e-15 * field.vacuum_e_sq());

  const std::size_t m = mode_index(field.grid(), {1, 2, -1}, Polarization::Two);
  const auto psi = coherent_state(field.universe(), 2, {{m, Complex(0.03, 0.01)}});
  for (const Vec3& r : sample_points()) {
    const auto p = field_expectation_3d(psi, r, 0.7, field);
    EXPECT_NEAR(length(p.b_field), std::sqrt(1.8) * length(p.e_field), 1e-14 * length(p.b_field) + 1e-300);
    EXPECT_NEAR(dot(p.e_field, p.b_field), 0.0, 1e-14);
  }
}

TEST(Field3DTest, PerModeAmplitude) {
  const Medium md(2.0, 1.0, 1.0, 1.0);
  const KGrid grid(0.5, 1);
  const Field3D field(md, grid);
  const std::size_t m = mode_index(grid, {1, 1, 0}, Polarization::One);
  const double w = 0.5;  // |k| = 0.5 sqrt(2), sqrt(εμ) = sqrt(2)
  EXPECT_NEAR(field.omega(m), w, 1e-15);
  EXPECT_NEAR(field.mode_amplitude(m), std::pow(0.5 / (2.0 * std::numbers::pi), 1.5) * std::sqrt(w / 4.0), 1e-16);
}

TEST(Field3DTest, TransportAlongPropagationDirection) {
  // With e^{-ik·r} a the expectation value moves along -k̂ at v = 1/sqrt(εμ).
  const Medium md(1.0, 4.0, 1.0, 1.0);
  const KGrid grid(0.5, 2);
  const Field3D field(md, grid);
  const LatticePoint kp{2, -1, 1};
  const std::size_t m = mode_index(grid, kp, Polarization::One);
  const auto psi = coherent_state(field.universe(), 2, {{m, Complex(0.02, -0.03)}});
  const Vec3 k_hat = normalize(grid.wavevector(kp));
  const double v = md.phase_speed();
  for (double delta : {0.2, 1.5}) {
    for (const Vec3& r : sample_points()) {
      const auto a = field_expectation_3d(psi, r, 0.1, field);
      const auto b = field_expectation_3d(psi, subtract(r, scale(k_hat, delta * v)), 0.1 + delta, field);
      for (int c = 0; c < 3; ++c) {
        EXPECT_NEAR(a.e_field[c], b.e_field[c], 1e-15);
        EXPECT_NEAR(a.b_field[c], b.b_field[c], 1e-15);
      }
    }
  }
}

TEST(Field3DTest, HermiticityResidue) {
  const Field3D field(Medium::natural(), KGrid(1.0, 1));
  Rng rng(33);
  const auto psi = random_state(field.universe(), 2, {0, 3, 8, 30}, 1, rng);
  for (const Vec3& r : sample_points()) {
    const auto s = field_expectation_3d(psi, r, 0.25, field, true);
    EXPECT_LE(s.imag_residue, 1e-12 * *s.e_sq);
  }
}

TEST(Field3DTest, ProfileMatchesPointwise) {
  const Field3D field(Medium::natural(), KGrid(1.0, 1));
  const auto psi = coherent_state(field.universe(), 2, {{4, Complex(0.01, 0.0)}, {9, Complex(0.0, 0.02)}});
  const auto pts = sample_points();
  const std::vector<double> ts{0.0, 0.5};
  const auto table = field_profile_3d(psi, pts, ts, field, true);
  ASSERT_EQ(table.size(), pts.size() * ts.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto p = field_expectation_3d(psi, pts[i / 2], ts[i % 2], field, true);
    EXPECT_EQ(table[i].e_field, p.e_field);
    EXPECT_EQ(*table[i].b_sq, *p.b_sq);
    EXPECT_EQ(table[i].position, pts[i / 2]);
  }
}

TEST(Energy3D, HamiltonianExpectation) {
  const Medium md(1.0, 1.0, 1.0, 1.0);
  const KGrid grid(0.5, 2);
  const auto u = make_universe(grid, md);
  const std::size_t a = mode_index(grid, {1, 0, 0}, Polarization::One);
  const std::size_t b = mode_index(grid, {2, 2, 1}, Polarization::Two);
  const auto one = number_state(u, 2, a, 1);
  EXPECT_NEAR(hamiltonian_3d_expectation(one, md).excitation_energy, 0.5, 1e-15);
  EXPECT_EQ(hamiltonian_3d_expectation(vacuum(u, 2), md).excitation_energy, 0.0);
  const auto two = basis_state(u, 2, OccupationTuple({{static_cast<std::uint32_t>(a), 1}, {static_cast<std::uint32_t>(b), 1}}));
  EXPECT_NEAR(hamiltonian_3d_expectation(two, md).excitation_energy, 0.5 + 1.5, 1e-15);
}

TEST(Energy3D, SinglePhotonQuadrature) {
  const Medium md(1.3, 0.9, 1.0, 1.0);
  const KGrid grid(0.5, 2);
  const Field3D field(md, grid);
  for (LatticePoint kp : {LatticePoint{1, 0, 0}, LatticePoint{2, -1, 1}, LatticePoint{-2, -2, -2}}) {
    for (Polarization p : {Polarization::One, Polarization::Two}) {
      const std::size_t m = mode_index(grid, kp, p);
      const auto q = energy_quadrature_3d(number_state(field.universe(), 2, m, 1), field, 12);
      EXPECT_NEAR(q.normal_ordered, field.omega(m), 1e-8 * field.omega(m));
    }
  }
}

TEST(Energy3D, VacuumQuadratureIsZeroPointEnergy) {
  const Medium md(1.3, 0.9, 1.0, 1.0);
  const Field3D field(md, KGrid(0.5, 2));
  const auto q = energy_quadrature_3d(vacuum(field.universe(), 2), field, 12);
  const double zpe = zero_point_energy(*field.universe(), md);
  EXPECT_NEAR(q.vacuum, zpe, 1e-10 * zpe);
  EXPECT_NEAR(q.normal_ordered, 0.0, 1e-300);
  EXPECT_THROW(energy_quadrature_3d(vacuum(field.universe(), 2), field, 8), std::invalid_argument);
}

TEST(Energy3D, CoherentQuadratureMatchesNumberExpectation) {
  const Medium md(1.0, 1.0, 1.0, 1.0);
  const KGrid grid(0.5, 1);
  const Field3D field(md, grid);
  const std::size_t a = mode_index(grid, {1, 1, 0}, Polarization::Two);
  const std::size_t b = mode_index(grid, {-1, 0, 1}, Polarization::One);
  const auto psi = coherent_state(field.universe(), 2, {{a, Complex(0.03, 0.0)}, {b, Complex(0.0, -0.02)}});
  const double expected = hamiltonian_3d_expectation(psi, md).excitation_energy;
  const auto q = energy_quadrature_3d(psi, field, 8);
  EXPECT_NEAR(q.normal_ordered, expected, 1e-8 * expected);
}

TEST(Divergence3D, VacuumGuarded) {
  const Field3D field(Medium::natural(), KGrid(1.0, 1));
  EXPECT_EQ(divergence_check(vacuum(field.universe(), 2), sample_points(), field, 1e-3).residual, 0.0);
}

TEST(Divergence3D, AxisAlignedPlaneWaveIsExact) {
  const Field3D field(Medium::natural(), KGrid(0.5, 2));
  const std::size_t m = mode_index(field.grid(), {2, 0, 0}, Polarization::One);  // |k| = 1
  const auto psi = coherent_state(field.universe(), 2, {{m, Complex(0.03, 0.0)}});
  EXPECT_LE(divergence_check(psi, sample_points(), field, 1e-3).residual, 1e-10);
}

TEST(Divergence3D, SecondOrderForOffAxisWave) {
  const Field3D field(Medium::natural(), KGrid(0.5, 2));
  const std::size_t m = mode_index(field.grid(), {2, 1, 0}, Polarization::Two);
  const auto psi = coherent_state(field.universe(), 2, {{m, Complex(0.02, 0.01)}});
  const double coarse = divergence_check(psi, sample_points(), field, 0.02).residual;
  const double fine = divergence_check(psi, sample_points(), field, 0.01).residual;
  EXPECT_GT(coarse, 0.0);
  EXPECT_NEAR(coarse / fine, 4.0, 0.05);
}

TEST(Curl3D, SecondOrderConvergence) {
  const Medium md(1.0, 2.0, 1.0, 1.0);
  const Field3D field(md, KGrid(0.5, 2));
  const std::size_t a = mode_index(field.grid(), {2, 1, -1}, Polarization::One);
  const std::size_t b = mode_index(field.grid(), {0, -1, 2}, Polarization::Two);
  const auto psi = coherent_state(field.universe(), 2, {{a, Complex(0.02, 0.0)}, {b, Complex(0.0, 0.015)}});
  std::vector<double> faraday, ampere;
  for (double h : {0.04, 0.02, 0.01}) {
    const auto r = curl_check(psi, sample_points(), field, h, h, 0.3);
    faraday.push_back(r.faraday / r.faraday_scale);
    ampere.push_back(r.ampere / r.ampere_scale);
  }
  for (std::size_t i = 1; i < 3; ++i) {
    EXPECT_GE(std::log2(faraday[i - 1] / faraday[i]), 1.9);
    EXPECT_GE(std::log2(ampere[i - 1] / ampere[i]), 1.9);
  }
  EXPECT_LE(faraday.back(), 1e-4);
}
