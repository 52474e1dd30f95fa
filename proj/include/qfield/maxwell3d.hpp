#pragma once

// Three-dimensional field on a finite cubic wave-vector lattice.
//
// Memory scaling: a lattice with half extent N carries (2N+1)^3 - 1 wave vectors and
// twice as many modes; the sparse states stay small only while few modes are excited
// and n_max is low. N <= 2 (124 wave vectors, 248 modes) is the intended size.

#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfield/field_core.hpp"
#include "qfield/fock.hpp"
#include "qfield/hamiltonian.hpp"
#include "qfield/medium.hpp"
#include "qfield/modes.hpp"
#include "qfield/observables.hpp"

namespace qfield {

using LatticePoint = std::array<int, 3>;

/// 3D mode label: integer lattice coordinates of k and a polarization index.
struct LatticeMode {
  LatticePoint k{};
  Polarization polarization = Polarization::One;

  auto operator<=>(const LatticeMode&) const = default;
};

/// Wave vectors k = Δk (i, j, l) with integer coordinates in [-N, N]^3, origin excluded.
/// The set is closed under k -> -k.
class KGrid {
 public:
  KGrid(double k_spacing, int half_extent) : k_spacing_(k_spacing), half_extent_(half_extent) {
    if (!(k_spacing > 0.0) || !std::isfinite(k_spacing)) {
      throw std::invalid_argument("KGrid: k_spacing must be positive");
    }
    if (half_extent < 1) throw std::invalid_argument("KGrid: half_extent must be at least 1");
    for (int i = -half_extent; i <= half_extent; ++i) {
      for (int j = -half_extent; j <= half_extent; ++j) {
        for (int l = -half_extent; l <= half_extent; ++l) {
          if (i == 0 && j == 0 && l == 0) continue;
          points_.push_back({i, j, l});
        }
      }
    }
  }

  double k_spacing() const { return k_spacing_; }
  int half_extent() const { return half_extent_; }
  const std::vector<LatticePoint>& points() const { return points_; }
  std::size_t mode_count() const { return 2 * points_.size(); }

  /// Edge of the periodic box on which the lattice plane waves are orthogonal.
  double box_length() const { return 2.0 * std::numbers::pi / k_spacing_; }

  Vec3 wavevector(const LatticePoint& p) const {
    return {k_spacing_ * p[0], k_spacing_ * p[1], k_spacing_ * p[2]};
  }

  bool contains(const LatticePoint& p) const {
    const bool inside = std::abs(p[0]) <= half_extent_ && std::abs(p[1]) <= half_extent_ &&
                        std::abs(p[2]) <= half_extent_;
    return inside && !(p[0] == 0 && p[1] == 0 && p[2] == 0);
  }

  std::size_t point_index(const LatticePoint& p) const {
    if (!contains(p)) {
      throw std::out_of_range("KGrid: lattice point (" + std::to_string(p[0]) + "," + std::to_string(p[1]) + "," +
                              std::to_string(p[2]) + ") is not on the lattice");
    }
    const std::size_t side = 2 * static_cast<std::size_t>(half_extent_) + 1;
    const auto shift = [&](int c) { return static_cast<std::size_t>(c + half_extent_); };
    const std::size_t linear = (shift(p[0]) * side + shift(p[1])) * side + shift(p[2]);
    const std::size_t origin = (shift(0) * side + shift(0)) * side + shift(0);
    return linear < origin ? linear : linear - 1;
  }

  std::size_t index_of(const LatticeMode& mode) const {
    return 2 * point_index(mode.k) + (mode.polarization == Polarization::One ? 0 : 1);
  }

  LatticeMode mode_at(std::size_t index) const {
    if (index >= mode_count()) throw std::out_of_range("KGrid: mode index outside lattice universe");
    return {points_[index / 2], index % 2 == 0 ? Polarization::One : Polarization::Two};
  }

  bool operator==(const KGrid& other) const {
    return k_spacing_ == other.k_spacing_ && half_extent_ == other.half_extent_;
  }

 private:
  double k_spacing_;
  int half_extent_;
  std::vector<LatticePoint> points_;
};

inline std::string lattice_label(const LatticeMode& mode) {
  return "λ" + std::to_string(to_int(mode.polarization)) + "@k=(" + std::to_string(mode.k[0]) + "," +
         std::to_string(mode.k[1]) + "," + std::to_string(mode.k[2]) + ")";
}

/// Universe of every (k, λ) mode; frequencies ω_k = |k| / sqrt(εμ) are fixed by `medium`.
inline UniversePtr make_universe(const KGrid& grid, const Medium& medium) {
  std::vector<std::string> labels;
  std::vector<double> omegas;
  labels.reserve(grid.mode_count());
  omegas.reserve(grid.mode_count());
  for (std::size_t i = 0; i < grid.mode_count(); ++i) {
    const LatticeMode mode = grid.mode_at(i);
    labels.push_back(lattice_label(mode));
    omegas.push_back(dispersion_omega(medium, length(grid.wavevector(mode.k))));
  }
  return std::make_shared<const ModeUniverse>(std::move(labels), std::move(omegas));
}

/// Transverse orthonormal pair with (e1, e2, k̂) right-handed:
/// e1 = normalize(k̂ × ẑ), or x̂ when k is (anti)parallel to ẑ; e2 = k̂ × e1.
inline std::pair<Vec3, Vec3> polarization_basis(const Vec3& k) {
  const double norm = length(k);
  if (!(norm > 0.0)) throw std::invalid_argument("polarization_basis: zero wave vector");
  const Vec3 k_hat = scale(k, 1.0 / norm);
  const Vec3 side = cross(k_hat, Vec3{0.0, 0.0, 1.0});
  const Vec3 e1 = length(side) > 1e-9 ? normalize(side) : Vec3{1.0, 0.0, 0.0};
  return {e1, cross(k_hat, e1)};
}

/// Field operators
///   E = i/(2π)^{3/2} Σ (Δk)^{3/2} sqrt(ħω_k/2ε) e^{-ik·r} a_kλ e_kλ + h.c.
///   B = -i sqrt(εμ)/(2π)^{3/2} Σ (Δk)^{3/2} sqrt(ħω_k/2ε) e^{-ik·r} a_kλ (k̂ × e_kλ) + h.c.
/// i.e. the continuum integral ∫d^3k with a_kλ -> a_{k,λ}/(Δk)^{3/2}.
class Field3D {
 public:
  Field3D(Medium medium, KGrid grid, double amplitude_scale = 1.0)
      : medium_(medium), grid_(std::move(grid)), amplitude_scale_(amplitude_scale),
        universe_(make_universe(grid_, medium_)) {
    if (!(amplitude_scale > 0.0)) throw std::invalid_argument("Field3D: amplitude_scale must be positive");
    bases_.reserve(grid_.points().size());
    for (const auto& p : grid_.points()) bases_.push_back(polarization_basis(grid_.wavevector(p)));
  }

  const Medium& medium() const { return medium_; }
  const KGrid& grid() const { return grid_; }
  const UniversePtr& universe() const { return universe_; }

  double omega(std::size_t index) const { return universe_->omega(index); }

  double mode_amplitude(std::size_t index) const {
    const double dk = grid_.k_spacing();
    return amplitude_scale_ * std::pow(dk / (2.0 * std::numbers::pi), 1.5) *
           std::sqrt(medium_.hbar() * omega(index) / (2.0 * medium_.epsilon()));
  }

  Vec3 polarization(std::size_t index) const {
    const auto& basis = bases_[index / 2];
    return index % 2 == 0 ? basis.first : basis.second;
  }

  Vec3 b_direction(std::size_t index) const {
    const Vec3 k = grid_.wavevector(grid_.mode_at(index).k);
    return cross(normalize(k), polarization(index));
  }

  Complex plane_wave(std::size_t index, const Vec3& r) const {
    return std::polar(1.0, -dot(grid_.wavevector(grid_.mode_at(index).k), r));
  }

  CVec3 e_coefficient(std::size_t index, const Vec3& r) const {
    return times(Complex(0.0, mode_amplitude(index)) * plane_wave(index, r), polarization(index));
  }

  CVec3 b_coefficient(std::size_t index, const Vec3& r) const {
    return times(Complex(0.0, -medium_.slowness() * mode_amplitude(index)) * plane_wave(index, r),
                 b_direction(index));
  }

  double vacuum_e_sq() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < universe_->size(); ++i) sum += std::pow(mode_amplitude(i), 2);
    return sum;
  }
  double vacuum_b_sq() const { return medium_.epsilon() * medium_.mu() * vacuum_e_sq(); }

  void require_compatible(const MultiModeState& state) const {
    if (!(state.universe_ptr() == universe_ || state.universe() == *universe_)) {
      throw std::invalid_argument("Field3D: state does not live on this lattice universe");
    }
  }

 private:
  Medium medium_;
  KGrid grid_;
  double amplitude_scale_;
  UniversePtr universe_;
  std::vector<std::pair<Vec3, Vec3>> bases_;
};

class FieldSnapshot3D {
 public:
  FieldSnapshot3D(const Field3D& field, const MultiModeState& evolved, double t, bool with_squares)
      : field_(&field), moments_(ladder_moments(evolved, with_squares)), t_(t), with_squares_(with_squares) {}

  FieldSample at(const Vec3& r) const {
    auto [fe, fb] = coefficients(r);
    FieldSample s;
    s.position = r;
    s.t = t_;
    s.e_field = real_part(linear_expectation(moments_, fe), s.imag_residue);
    s.b_field = real_part(linear_expectation(moments_, fb), s.imag_residue);
    if (with_squares_) {
      const Complex e2 = normal_ordered_square(moments_, fe);
      const Complex b2 = normal_ordered_square(moments_, fb);
      s.imag_residue = std::max({s.imag_residue, std::abs(e2.imag()), std::abs(b2.imag())});
      s.e_sq = e2.real() + field_->vacuum_e_sq();
      s.b_sq = b2.real() + field_->vacuum_b_sq();
    }
    return s;
  }

  std::pair<double, double> normal_ordered_squares(const Vec3& r) const {
    if (!with_squares_) throw std::logic_error("FieldSnapshot3D: second moments were not computed");
    auto [fe, fb] = coefficients(r);
    return {normal_ordered_square(moments_, fe).real(), normal_ordered_square(moments_, fb).real()};
  }

 private:
  std::pair<std::vector<CVec3>, std::vector<CVec3>> coefficients(const Vec3& r) const {
    std::vector<CVec3> fe(moments_.size()), fb(moments_.size());
    for (std::size_t j = 0; j < moments_.size(); ++j) {
      fe[j] = field_->e_coefficient(moments_.active[j], r);
      fb[j] = field_->b_coefficient(moments_.active[j], r);
    }
    return {std::move(fe), std::move(fb)};
  }

  const Field3D* field_;
  LadderMoments moments_;
  double t_;
  bool with_squares_;
};

inline FieldSample field_expectation_3d(const MultiModeState& state, const Vec3& r, double t, const Field3D& field,
                                        bool with_squares = false) {
  field.require_compatible(state);
  require_normalized(state, "field_expectation_3d");
  return FieldSnapshot3D(field, evolve(state, field.medium(), t), t, with_squares).at(r);
}

/// Row-major over (point, time) with the point as the outer index.
inline std::vector<FieldSample> field_profile_3d(const MultiModeState& state, const std::vector<Vec3>& points,
                                                 const std::vector<double>& ts, const Field3D& field,
                                                 bool with_squares = false) {
  if (points.empty()) throw std::invalid_argument("field_profile_3d: no sample points");
  require_increasing(ts, "t");
  field.require_compatible(state);
  require_normalized(state, "field_profile_3d");
  std::vector<std::optional<FieldSnapshot3D>> snapshots(ts.size());
  parallel_for(ts.size(), [&](std::size_t it) {
    snapshots[it].emplace(field, evolve(state, field.medium(), ts[it]), ts[it], with_squares);
  });
  std::vector<FieldSample> table(points.size() * ts.size());
  parallel_for(table.size(), [&](std::size_t k) { table[k] = snapshots[k % ts.size()]->at(points[k / ts.size()]); });
  return table;
}

/// Σ_{k,λ} ħω_k ⟨n_kλ⟩ plus the finite-lattice zero-point energy.
inline EnergyReport hamiltonian_3d_expectation(const MultiModeState& state, const Medium& medium) {
  return energy_expectation(state, medium, true);
}

/// ½ ∫_box d^3r [ε⟨:E·E:⟩ + ⟨:B·B:⟩/μ] over the periodic box of edge 2π/Δk (periodic
/// trapezoid rule, `points_per_axis` nodes per edge) together with the same integral of the
/// vacuum part ½ ∫ [ε⟨0|E·E|0⟩ + ⟨0|B·B|0⟩/μ].
struct EnergyQuadrature {
  double normal_ordered = 0.0;
  double vacuum = 0.0;
};

inline EnergyQuadrature energy_quadrature_3d(const MultiModeState& state, const Field3D& field,
                                             int points_per_axis = 16) {
  field.require_compatible(state);
  require_normalized(state, "energy_quadrature_3d");
  // Integrand harmonics reach 2N per axis; the periodic rule is exact below points_per_axis.
  if (points_per_axis <= 4 * field.grid().half_extent()) {
    throw std::invalid_argument("energy_quadrature_3d: need more than 4N points per axis for exact quadrature");
  }
  const FieldSnapshot3D snap(field, state, 0.0, true);
  const double edge = field.grid().box_length();
  const double h = edge / points_per_axis;
  const std::size_t m = static_cast<std::size_t>(points_per_axis);
  std::vector<double> plane(m, 0.0);
  const double eps = field.medium().epsilon();
  const double mu = field.medium().mu();
  parallel_for(m, [&](std::size_t i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t l = 0; l < m; ++l) {
        auto [e2, b2] = snap.normal_ordered_squares(Vec3{i * h, j * h, l * h});
        sum += 0.5 * (eps * e2 + b2 / mu);
      }
    }
    plane[i] = sum;
  });
  EnergyQuadrature q;
  for (double v : plane) q.normal_ordered += v;
  q.normal_ordered *= h * h * h;
  q.vacuum = 0.5 * (eps * field.vacuum_e_sq() + field.vacuum_b_sq() / mu) * edge * edge * edge;
  return q;
}

/// Central-difference divergence of ⟨E⟩ and ⟨B⟩ at each point, normalized by the largest
/// entry of the corresponding central-difference gradient tensor.
struct DivergenceResult {
  double residual = 0.0;  ///< max of the two normalized divergences
  double max_div_e = 0.0;
  double max_div_b = 0.0;
  double grad_scale_e = 0.0;
  double grad_scale_b = 0.0;
};

inline DivergenceResult divergence_check(const MultiModeState& state, const std::vector<Vec3>& r_grid,
                                         const Field3D& field, double h, double t = 0.0) {
  if (!(h > 0.0)) throw std::invalid_argument("divergence_check: spacing must be positive");
  field.require_compatible(state);
  require_normalized(state, "divergence_check");
  const FieldSnapshot3D snap(field, evolve(state, field.medium(), t), t, false);
  DivergenceResult out;
  for (const Vec3& r : r_grid) {
    double div_e = 0.0, div_b = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 step{};
      step[axis] = h;
      const FieldSample plus = snap.at(add(r, step));
      const FieldSample minus = snap.at(subtract(r, step));
      for (int c = 0; c < 3; ++c) {
        const double de = (plus.e_field[c] - minus.e_field[c]) / (2.0 * h);
        const double db = (plus.b_field[c] - minus.b_field[c]) / (2.0 * h);
        out.grad_scale_e = std::max(out.grad_scale_e, std::abs(de));
        out.grad_scale_b = std::max(out.grad_scale_b, std::abs(db));
        if (c == axis) {
          div_e += de;
          div_b += db;
        }
      }
    }
    out.max_div_e = std::max(out.max_div_e, std::abs(div_e));
    out.max_div_b = std::max(out.max_div_b, std::abs(div_b));
  }
  const double re = out.grad_scale_e > 0.0 ? out.max_div_e / out.grad_scale_e : 0.0;
  const double rb = out.grad_scale_b > 0.0 ? out.max_div_b / out.grad_scale_b : 0.0;
  out.residual = std::max(re, rb);
  return out;
}

/// Central-difference residuals of ∇×⟨E⟩ = -∂t⟨B⟩ and ∇×⟨B⟩ = εμ ∂t⟨E⟩.
struct CurlResult {
  double faraday = 0.0;  ///< max |∇×E + ∂tB|
  double ampere = 0.0;   ///< max |∇×B - εμ ∂tE|
  double faraday_scale = 0.0;
  double ampere_scale = 0.0;
};

inline CurlResult curl_check(const MultiModeState& state, const std::vector<Vec3>& r_grid, const Field3D& field,
                             double h, double tau, double t = 0.0) {
  if (!(h > 0.0) || !(tau > 0.0)) throw std::invalid_argument("curl_check: spacings must be positive");
  field.require_compatible(state);
  require_normalized(state, "curl_check");
  const Medium& medium = field.medium();
  const FieldSnapshot3D now(field, evolve(state, medium, t), t, false);
  const FieldSnapshot3D later(field, evolve(state, medium, t + tau), t + tau, false);
  const FieldSnapshot3D earlier(field, evolve(state, medium, t - tau), t - tau, false);
  const double em = medium.epsilon() * medium.mu();
  CurlResult out;
  for (const Vec3& r : r_grid) {
    // jac[c][axis] = ∂_axis field_c
    std::array<Vec3, 3> je{}, jb{};
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 step{};
      step[axis] = h;
      const FieldSample plus = now.at(add(r, step));
      const FieldSample minus = now.at(subtract(r, step));
      for (int c = 0; c < 3; ++c) {
        je[c][axis] = (plus.e_field[c] - minus.e_field[c]) / (2.0 * h);
        jb[c][axis] = (plus.b_field[c] - minus.b_field[c]) / (2.0 * h);
      }
    }
    const Vec3 curl_e{je[2][1] - je[1][2], je[0][2] - je[2][0], je[1][0] - je[0][1]};
    const Vec3 curl_b{jb[2][1] - jb[1][2], jb[0][2] - jb[2][0], jb[1][0] - jb[0][1]};
    const FieldSample up = later.at(r);
    const FieldSample down = earlier.at(r);
    for (int c = 0; c < 3; ++c) {
      const double dt_b = (up.b_field[c] - down.b_field[c]) / (2.0 * tau);
      const double dt_e = (up.e_field[c] - down.e_field[c]) / (2.0 * tau);
      out.faraday = std::max(out.faraday, std::abs(curl_e[c] + dt_b));
      out.ampere = std::max(out.ampere, std::abs(curl_b[c] - em * dt_e));
      out.faraday_scale = std::max({out.faraday_scale, std::abs(curl_e[c]), std::abs(dt_b)});
      out.ampere_scale = std::max({out.ampere_scale, std::abs(curl_b[c]), std::abs(em * dt_e)});
    }
  }
  return out;
}

}  // namespace qfield
