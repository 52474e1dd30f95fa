#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfield/field_core.hpp"
#include "qfield/fock.hpp"
#include "qfield/hamiltonian.hpp"
#include "qfield/medium.hpp"
#include "qfield/modes.hpp"
#include "qfield/parallel.hpp"

namespace qfield {

/// Transverse polarization pair for propagation along x. Defaults to e1 = y, e2 = z.
struct PolarizationBasis1D {
  Vec3 e1{0.0, 1.0, 0.0};
  Vec3 e2{0.0, 0.0, 1.0};

  const Vec3& vector(Polarization p) const { return p == Polarization::One ? e1 : e2; }

  void validate() const {
    constexpr double tol = 1e-12;
    const Vec3 x_hat{1.0, 0.0, 0.0};
    if (std::abs(length(e1) - 1.0) > tol || std::abs(length(e2) - 1.0) > tol ||
        std::abs(dot(e1, e2)) > tol || std::abs(dot(e1, x_hat)) > tol || std::abs(dot(e2, x_hat)) > tol) {
      throw std::invalid_argument("PolarizationBasis1D: e1, e2 must be orthonormal and orthogonal to x");
    }
  }

  bool operator==(const PolarizationBasis1D&) const = default;
};

/// Residuals of the mode-function ODE pair
///   ∂x f = ∓ iω g,  ∂x g = ∓ iεμω f   (upper sign L, lower sign R),
/// relative to |ω f| and |εμ ω f| respectively.
struct BranchResiduals {
  double analytic_f = 0.0;
  double analytic_g = 0.0;
  double fd_f = 0.0;  ///< with a second-order central difference for ∂x
  double fd_g = 0.0;
};

struct ModeFunctionPair {
  Complex f;  ///< multiplies a in the electric-field amplitude E_λ
  Complex g;  ///< multiplies a in the magnetic amplitude B_λ (same-sign convention as E)
  ModeId mode;
  double x = 0.0;
  std::optional<BranchResiduals> branch;
};

/// One-dimensional quantized field on a frequency grid.
///
/// Per grid bin the mode functions are
///   f_L = K e^{-ikx},  f_R = K e^{+ikx},  g = sqrt(εμ) f,   K = i |K|,
///   |K|^2 = ħ ω Δk / (4π ε A),  Δk = sqrt(εμ) Δω,
/// and the vector fields are
///   E = Σ_j (f_j a_j + h.c.) e_λ,   B = Σ_j s_X (g_j a_j + h.c.) (x̂ × e_λ),
/// with s_L = -1, s_R = +1 (right-hand rule for each propagation direction).
/// `amplitude_scale` multiplies every K; it exists for negative-control runs only.
class Field1D {
 public:
  Field1D(Medium medium, FrequencyGrid grid, PolarizationBasis1D basis = {}, double amplitude_scale = 1.0)
      : medium_(medium), grid_(grid), basis_(basis), amplitude_scale_(amplitude_scale),
        universe_(make_universe(grid)) {
    basis_.validate();
    if (!(amplitude_scale > 0.0)) throw std::invalid_argument("Field1D: amplitude_scale must be positive");
  }

  const Medium& medium() const { return medium_; }
  const FrequencyGrid& grid() const { return grid_; }
  const PolarizationBasis1D& basis() const { return basis_; }
  double amplitude_scale() const { return amplitude_scale_; }
  const UniversePtr& universe() const { return universe_; }

  double omega(std::size_t freq_index) const { return grid_.omega(freq_index); }
  double wavenumber(std::size_t freq_index) const { return dispersion_k(medium_, omega(freq_index)); }

  /// |K| for one bin.
  double mode_amplitude(std::size_t freq_index) const {
    const double w = omega(freq_index);
    return amplitude_scale_ *
           std::sqrt(medium_.hbar() * w * grid_.k_spacing(medium_) /
                     (4.0 * std::numbers::pi * medium_.epsilon() * medium_.area()));
  }

  Complex f(const ModeId& mode, double x) const {
    const double kx = wavenumber(mode.freq_index) * x;
    const double phase = mode.direction == Direction::L ? -kx : kx;
    return Complex(0.0, mode_amplitude(mode.freq_index)) * std::polar(1.0, phase);
  }

  Complex g(const ModeId& mode, double x) const { return medium_.slowness() * f(mode, x); }

  static double direction_sign(Direction d) { return d == Direction::L ? -1.0 : 1.0; }

  /// Unit vector the magnetic amplitude of `mode` points along.
  Vec3 b_direction(const ModeId& mode) const {
    return scale(cross(Vec3{1.0, 0.0, 0.0}, basis_.vector(mode.polarization)), direction_sign(mode.direction));
  }

  CVec3 e_coefficient(std::size_t index, double x) const {
    const ModeId mode = mode_at(grid_, index);
    return times(f(mode, x), basis_.vector(mode.polarization));
  }

  CVec3 b_coefficient(std::size_t index, double x) const {
    const ModeId mode = mode_at(grid_, index);
    return times(g(mode, x), b_direction(mode));
  }

  /// ⟨0|E·E|0⟩ = Σ_j |F_j|^2 over every mode.
  double vacuum_e_sq() const {
    double sum = 0.0;
    for (std::size_t m = 0; m < grid_.count(); ++m) sum += 4.0 * std::pow(mode_amplitude(m), 2);
    return sum;
  }
  double vacuum_b_sq() const { return medium_.epsilon() * medium_.mu() * vacuum_e_sq(); }

  void require_compatible(const MultiModeState& state) const {
    const auto& line = state.universe().line_grid();
    if (!line || !(*line == grid_)) {
      throw std::invalid_argument("Field1D: state does not live on this field's frequency grid");
    }
  }

 private:
  Medium medium_;
  FrequencyGrid grid_;
  PolarizationBasis1D basis_;
  double amplitude_scale_;
  UniversePtr universe_;
};

/// Analytic and central-difference residuals of the ODE pair at x. `flip_branch` swaps the
/// L/R sign, which must make the residual O(1).
inline BranchResiduals mode_ode_residuals(const Field1D& field, const ModeId& mode, double x, double dx,
                                          bool flip_branch = false) {
  const double w = field.omega(mode.freq_index);
  const double k = field.wavenumber(mode.freq_index);
  const double em = field.medium().epsilon() * field.medium().mu();
  double sigma = mode.direction == Direction::L ? 1.0 : -1.0;
  if (flip_branch) sigma = -sigma;
  const Complex i{0.0, 1.0};
  const Complex f = field.f(mode, x);
  const Complex g = field.g(mode, x);
  // Closed-form x-derivatives of the exponentials.
  const double travel = mode.direction == Direction::L ? -1.0 : 1.0;
  const Complex df = i * travel * k * f;
  const Complex dg = i * travel * k * g;
  const double f_scale = std::abs(w * f);
  const double g_scale = std::abs(em * w * f);
  BranchResiduals r;
  r.analytic_f = std::abs(df + sigma * i * w * g) / f_scale;
  r.analytic_g = std::abs(dg + sigma * i * em * w * f) / g_scale;
  const Complex df_fd = (field.f(mode, x + dx) - field.f(mode, x - dx)) / (2.0 * dx);
  const Complex dg_fd = (field.g(mode, x + dx) - field.g(mode, x - dx)) / (2.0 * dx);
  r.fd_f = std::abs(df_fd + sigma * i * w * g) / f_scale;
  r.fd_g = std::abs(dg_fd + sigma * i * em * w * f) / g_scale;
  return r;
}

inline ModeFunctionPair mode_functions(const ModeId& mode, double x, const Field1D& field, bool branch_check = false,
                                       double dx = 1e-3) {
  ModeFunctionPair pair{field.f(mode, x), field.g(mode, x), mode, x, std::nullopt};
  if (branch_check) pair.branch = mode_ode_residuals(field, mode, x, dx);
  return pair;
}

inline ModeFunctionPair mode_functions(const ModeId& mode, double x, const Medium& medium, const FrequencyGrid& grid,
                                       bool branch_check = false) {
  return mode_functions(mode, x, Field1D(medium, grid), branch_check);
}

/// Field expectations at fixed time from precomputed moments; evaluating many positions
/// shares one moment computation.
class FieldSnapshot1D {
 public:
  FieldSnapshot1D(const Field1D& field, const MultiModeState& evolved, double t, bool with_squares)
      : field_(&field), moments_(ladder_moments(evolved, with_squares)), t_(t), with_squares_(with_squares) {}

  FieldSample at(double x) const {
    std::vector<CVec3> fe(moments_.size()), fb(moments_.size());
    for (std::size_t j = 0; j < moments_.size(); ++j) {
      fe[j] = field_->e_coefficient(moments_.active[j], x);
      fb[j] = field_->b_coefficient(moments_.active[j], x);
    }
    FieldSample s;
    s.position = {x, 0.0, 0.0};
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

  /// ⟨:E·E:⟩ and ⟨:B·B:⟩ at x (requires with_squares).
  std::pair<double, double> normal_ordered_squares(double x) const {
    if (!with_squares_) throw std::logic_error("FieldSnapshot1D: second moments were not computed");
    std::vector<CVec3> fe(moments_.size()), fb(moments_.size());
    for (std::size_t j = 0; j < moments_.size(); ++j) {
      fe[j] = field_->e_coefficient(moments_.active[j], x);
      fb[j] = field_->b_coefficient(moments_.active[j], x);
    }
    return {normal_ordered_square(moments_, fe).real(), normal_ordered_square(moments_, fb).real()};
  }

  const LadderMoments& moments() const { return moments_; }

 private:
  const Field1D* field_;
  LadderMoments moments_;
  double t_;
  bool with_squares_;
};

/// ⟨E(x)⟩, ⟨B(x)⟩ (and optionally ⟨E·E⟩, ⟨B·B⟩) in the state evolved to time t.
inline FieldSample field_expectation(const MultiModeState& state, double x, double t, const Field1D& field,
                                     bool with_squares = false) {
  field.require_compatible(state);
  require_normalized(state, "field_expectation");
  return FieldSnapshot1D(field, evolve(state, field.medium(), t), t, with_squares).at(x);
}

inline FieldSample field_expectation(const MultiModeState& state, double x, double t, const Medium& medium,
                                     const PolarizationBasis1D& basis, bool with_squares = false) {
  const auto& line = state.universe().line_grid();
  if (!line) throw std::invalid_argument("field_expectation: state is not on a 1D frequency grid");
  return field_expectation(state, x, t, Field1D(medium, *line, basis), with_squares);
}

inline void require_increasing(const std::vector<double>& values, const char* what) {
  if (values.empty()) throw std::invalid_argument(std::string(what) + " grid is empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) {
      throw std::invalid_argument(std::string(what) + " grid must be strictly increasing");
    }
  }
}

/// Samples on the tensor grid xs × ts, row-major with x as the outer index.
inline std::vector<FieldSample> field_profile(const MultiModeState& state, const std::vector<double>& xs,
                                              const std::vector<double>& ts, const Field1D& field,
                                              bool with_squares = false) {
  require_increasing(xs, "x");
  require_increasing(ts, "t");
  field.require_compatible(state);
  require_normalized(state, "field_profile");
  std::vector<std::optional<FieldSnapshot1D>> snapshots(ts.size());
  parallel_for(ts.size(), [&](std::size_t it) {
    snapshots[it].emplace(field, evolve(state, field.medium(), ts[it]), ts[it], with_squares);
  });
  std::vector<FieldSample> table(xs.size() * ts.size());
  parallel_for(table.size(), [&](std::size_t k) {
    table[k] = snapshots[k % ts.size()]->at(xs[k / ts.size()]);
  });
  return table;
}

/// Raised when a coherent state would lose more than the allowed probability to the cap.
class TruncationBudgetError : public std::invalid_argument {
 public:
  TruncationBudgetError(const std::string& what, unsigned required_n_max)
      : std::invalid_argument(what), required_n_max_(required_n_max) {}
  unsigned required_n_max() const { return required_n_max_; }

 private:
  unsigned required_n_max_;
};

/// Poisson tail P(n > n_max) for mean |α|^2, summed directly to avoid cancellation.
inline double poisson_tail(double mean, unsigned n_max) {
  if (mean == 0.0) return 0.0;
  double tail = 0.0;
  for (unsigned n = n_max + 1;; ++n) {
    const double term = std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
    tail += term;
    if (n > mean && term < 1e-18 * tail) break;
    if (n > n_max + 100000) break;
  }
  return tail;
}

enum class TruncationPolicy { Reject, Allow };

inline constexpr double kCoherentLossBudget = 1e-8;

/// Product of single-mode coherent states e^{-|α|^2/2} Σ α^n/sqrt(n!) |n⟩, renormalized
/// after truncation. Rejects (by default) when the discarded probability exceeds 1e-8.
inline MultiModeState coherent_state(UniversePtr universe, unsigned n_max,
                                     const std::vector<std::pair<std::size_t, Complex>>& amplitudes,
                                     TruncationPolicy policy = TruncationPolicy::Reject) {
  MultiModeState state = vacuum(universe, n_max);
  std::vector<std::size_t> seen;
  double kept = 1.0;
  double total_mean = 0.0;
  for (const auto& [mode, alpha] : amplitudes) {
    require_mode(state, mode);
    if (std::find(seen.begin(), seen.end(), mode) != seen.end()) {
      throw std::invalid_argument("coherent_state: mode " + state.universe().label(mode) + " listed twice");
    }
    seen.push_back(mode);
    const double mean = std::norm(alpha);
    total_mean += mean;
    kept *= 1.0 - poisson_tail(mean, n_max);
  }
  const double loss = 1.0 - kept;
  if (policy == TruncationPolicy::Reject && loss > kCoherentLossBudget) {
    unsigned needed = n_max;
    for (;;) {
      double k = 1.0;
      for (const auto& [mode, alpha] : amplitudes) k *= 1.0 - poisson_tail(std::norm(alpha), needed);
      if (1.0 - k <= kCoherentLossBudget) break;
      ++needed;
    }
    throw TruncationBudgetError("coherent_state: truncation at n_max = " + std::to_string(n_max) + " discards " +
                                    format_double(loss) + " of the probability (budget 1e-8, total mean photon "
                                    "number " + format_double(total_mean) + "); n_max >= " +
                                    std::to_string(needed) + " required",
                                needed);
  }
  for (const auto& [mode, alpha] : amplitudes) {
    if (alpha == Complex{}) continue;
    std::vector<Complex> coeff(n_max + 1);
    coeff[0] = std::exp(-0.5 * std::norm(alpha));
    for (unsigned n = 1; n <= n_max; ++n) coeff[n] = coeff[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    MultiModeState next(universe, n_max);
    for (const auto& [tuple, amp] : state.amplitudes()) {
      for (unsigned n = 0; n <= n_max; ++n) {
        const Complex value = amp * coeff[n];
        if (std::abs(value) < kPruneThreshold) continue;
        next.accumulate(tuple.with(mode, n), value);
      }
    }
    state = std::move(next);
  }
  return normalized(state);
}

inline MultiModeState coherent_state(const Field1D& field, unsigned n_max,
                                     const std::vector<std::pair<ModeId, Complex>>& amplitudes,
                                     TruncationPolicy policy = TruncationPolicy::Reject) {
  std::vector<std::pair<std::size_t, Complex>> indexed;
  for (const auto& [mode, alpha] : amplitudes) indexed.emplace_back(mode_index(field.grid(), mode), alpha);
  return coherent_state(field.universe(), n_max, indexed, policy);
}

inline MultiModeState coherent_state(const FrequencyGrid& grid, unsigned n_max,
                                     const std::vector<std::pair<ModeId, Complex>>& amplitudes,
                                     TruncationPolicy policy = TruncationPolicy::Reject) {
  std::vector<std::pair<std::size_t, Complex>> indexed;
  for (const auto& [mode, alpha] : amplitudes) indexed.emplace_back(mode_index(grid, mode), alpha);
  return coherent_state(make_universe(grid), n_max, indexed, policy);
}

/// "%.17g" so every value survives a text round trip.
inline std::string csv_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

/// CSV with columns x,t,Ex,Ey,Ez,Bx,By,Bz[,E2,B2] (1D) or r_x,r_y,r_z,t,... (3D).
inline void write_profile_csv(std::ostream& out, const std::vector<FieldSample>& samples, bool with_squares,
                              bool three_d = false) {
  out << (three_d ? "r_x,r_y,r_z,t" : "x,t") << ",Ex,Ey,Ez,Bx,By,Bz" << (with_squares ? ",E2,B2" : "") << '\n';
  for (const FieldSample& s : samples) {
    if (three_d) {
      out << csv_number(s.position[0]) << ',' << csv_number(s.position[1]) << ',' << csv_number(s.position[2]);
    } else {
      out << csv_number(s.position[0]);
    }
    out << ',' << csv_number(s.t);
    for (double v : s.e_field) out << ',' << csv_number(v);
    for (double v : s.b_field) out << ',' << csv_number(v);
    if (with_squares) {
      out << ',' << csv_number(s.e_sq.value_or(0.0)) << ',' << csv_number(s.b_sq.value_or(0.0));
    }
    out << '\n';
  }
}

}  // namespace qfield
