#pragma once

// Shared machinery for evaluating fields that are linear in the ladder operators,
//   O(r) = Σ_j F_j(r) a_j + F_j(r)^* a_j^†,
// from the low-order moments of a state.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "qfield/fock.hpp"

namespace qfield {

using Vec3 = std::array<double, 3>;
using CVec3 = std::array<Complex, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double length(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
inline Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 subtract(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 normalize(const Vec3& a) { return scale(a, 1.0 / length(a)); }

inline CVec3 times(Complex s, const Vec3& v) { return {s * v[0], s * v[1], s * v[2]}; }
/// Bilinear (unconjugated) product.
inline Complex bilinear(const CVec3& a, const CVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm_squared(const CVec3& a) { return std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]); }

/// Expectation values of E and B at one space-time point.
struct FieldSample {
  Vec3 e_field{};
  Vec3 b_field{};
  std::optional<double> e_sq;  ///< ⟨E·E⟩ including vacuum fluctuations
  std::optional<double> b_sq;  ///< ⟨B·B⟩ including vacuum fluctuations
  Vec3 position{};
  double t = 0.0;
  /// Largest imaginary part discarded from any expectation (zero for Hermitian fields).
  double imag_residue = 0.0;
};

/// ⟨a_j⟩, ⟨a_j^†⟩, ⟨a_i^† a_j⟩ and ⟨a_i a_j⟩ restricted to the modes the state occupies.
/// Every other mode has vanishing moments.
struct LadderMoments {
  std::vector<std::size_t> active;
  std::vector<Complex> lower;   ///< ⟨a_j⟩
  std::vector<Complex> raise;   ///< ⟨a_j^†⟩, computed with the creation operator
  std::vector<Complex> normal;  ///< ⟨a_i^† a_j⟩, row-major over active
  std::vector<Complex> pair;    ///< ⟨a_i a_j⟩, row-major over active

  std::size_t size() const { return active.size(); }
};

inline std::vector<std::size_t> occupied_modes(const MultiModeState& state) {
  std::vector<bool> seen(state.universe().size(), false);
  for (const auto& [tuple, amp] : state.amplitudes()) {
    for (const auto& [mode, n] : tuple.entries()) seen[mode] = true;
  }
  std::vector<std::size_t> modes;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) modes.push_back(i);
  }
  return modes;
}

/// Computes the moments with explicit ladder-operator applications.
inline LadderMoments ladder_moments(const MultiModeState& state, bool second_order) {
  LadderMoments m;
  m.active = occupied_modes(state);
  const std::size_t n = m.active.size();
  std::vector<MultiModeState> lowered;
  lowered.reserve(n);
  for (std::size_t j : m.active) lowered.push_back(annihilate(state, j));
  m.lower.resize(n);
  m.raise.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    m.lower[j] = inner(state, lowered[j]);
    m.raise[j] = inner(state, create(state, m.active[j]).state);
  }
  if (second_order) {
    m.normal.resize(n * n);
    m.pair.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m.normal[i * n + j] = inner(lowered[i], lowered[j]);
        m.pair[i * n + j] = inner(state, annihilate(lowered[j], m.active[i]));
      }
    }
  }
  return m;
}

/// Value of Σ F_j⟨a_j⟩ + F_j^*⟨a_j^†⟩; the imaginary part is the Hermiticity residue.
inline CVec3 linear_expectation(const LadderMoments& m, const std::vector<CVec3>& coeff) {
  CVec3 sum{};
  for (std::size_t j = 0; j < m.size(); ++j) {
    for (int c = 0; c < 3; ++c) sum[c] += coeff[j][c] * m.lower[j] + std::conj(coeff[j][c]) * m.raise[j];
  }
  return sum;
}

/// Normal-ordered ⟨:O·O:⟩ = Σ_ij 2 Re[(F_i·F_j)⟨a_i a_j⟩] + 2 (F_i^*·F_j)⟨a_i^† a_j⟩.
inline Complex normal_ordered_square(const LadderMoments& m, const std::vector<CVec3>& coeff) {
  const std::size_t n = m.size();
  Complex sum{};
  for (std::size_t i = 0; i < n; ++i) {
    CVec3 conj_i{std::conj(coeff[i][0]), std::conj(coeff[i][1]), std::conj(coeff[i][2])};
    for (std::size_t j = 0; j < n; ++j) {
      sum += 2.0 * std::real(bilinear(coeff[i], coeff[j]) * m.pair[i * n + j]);
      sum += 2.0 * bilinear(conj_i, coeff[j]) * m.normal[i * n + j];
    }
  }
  return sum;
}

inline Vec3 real_part(const CVec3& v, double& residue) {
  Vec3 out{};
  for (int c = 0; c < 3; ++c) {
    out[c] = v[c].real();
    residue = std::max(residue, std::abs(v[c].imag()));
  }
  return out;
}

}  // namespace qfield
