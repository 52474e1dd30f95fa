#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfield/field_core.hpp"
#include "qfield/fock.hpp"
#include "qfield/hamiltonian.hpp"
#include "qfield/maxwell3d.hpp"
#include "qfield/medium.hpp"
#include "qfield/modes.hpp"
#include "qfield/observables.hpp"
#include "qfield/random.hpp"

namespace qfield {

/// Outcome of one verification check.
///
/// pass holds when max_abs_residual / normalization <= tolerance and, if both an order was
/// fitted and a minimum order is required, order >= min_order. A zero normalization (zero
/// field) is replaced by 1 so that 0/0 counts as a zero residual.
struct ResidualReport {
  std::string check;
  double max_abs_residual = 0.0;
  double normalization = 1.0;
  double tolerance = 0.0;
  std::optional<double> order;
  std::optional<double> min_order;
  std::vector<double> spacings;
  std::map<std::string, double> params;
  bool pass = false;

  double relative() const { return max_abs_residual / (normalization > 0.0 ? normalization : 1.0); }

  ResidualReport& finalize() {
    if (!(normalization > 0.0)) normalization = 1.0;
    pass = relative() <= tolerance;
    if (pass && min_order && order) pass = *order >= *min_order;
    return *this;
  }
};

/// Relative residuals below this are treated as roundoff and carry no convergence information.
inline constexpr double kRoundoffFloor = 1e-11;

/// Least-squares slope of log(residual) against log(spacing). Returns nothing when any
/// residual sits at roundoff level.
inline std::optional<double> fit_order(const std::vector<double>& spacings, const std::vector<double>& residuals,
                                       double floor = kRoundoffFloor) {
  if (spacings.size() != residuals.size() || spacings.size() < 2) {
    throw std::invalid_argument("fit_order: need at least two (spacing, residual) pairs");
  }
  for (double r : residuals) {
    if (!(r > floor)) return std::nullopt;
  }
  const std::size_t n = spacings.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(spacings[i]);
    const double y = std::log(residuals[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Geometric refinement {base, base/2, base/4, ...}.
inline std::vector<double> halving_sequence(double base, std::size_t levels = 3) {
  if (!(base > 0.0)) throw std::invalid_argument("spacing must be positive");
  std::vector<double> out;
  for (std::size_t i = 0; i < levels; ++i) out.push_back(base / std::pow(2.0, static_cast<double>(i)));
  return out;
}

namespace detail {

inline MultiModeState difference(const MultiModeState& a, const MultiModeState& b) {
  return superpose(a, scaled(b, -1.0));
}

inline double largest_wavenumber(const MultiModeState& state, const Field1D& field) {
  double k = 0.0;
  for (std::size_t j : occupied_modes(state)) k = std::max(k, field.wavenumber(mode_at(field.grid(), j).freq_index));
  return k > 0.0 ? k : field.wavenumber(field.grid().count() - 1);
}

inline double largest_wavenumber(const MultiModeState& state, const Field3D& field) {
  double k = 0.0;
  for (std::size_t j : occupied_modes(state)) {
    k = std::max(k, length(field.grid().wavevector(field.grid().mode_at(j).k)));
  }
  return k > 0.0 ? k : field.grid().k_spacing();
}

inline double max_abs(const Vec3& v) { return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}); }

}  // namespace detail

/// [a_m, a_n^†] = δ_mn and [a_m, a_n] = 0 applied to random probe vectors below the cap.
/// The residual is the largest vector norm ||[A, B] p - c p|| over modes and probes.
inline ResidualReport check_ladder_algebra(const UniversePtr& universe, unsigned n_max,
                                           const std::vector<std::size_t>& modes, std::size_t probes,
                                           std::uint64_t seed, double tolerance = 1e-12) {
  if (n_max < 2) throw std::invalid_argument("ladder_algebra: n_max must be at least 2");
  if (modes.empty()) throw std::invalid_argument("ladder_algebra: no modes selected");
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t p = 0; p < probes; ++p) {
    const MultiModeState probe = random_state(universe, n_max, modes, n_max - 1, rng);
    for (std::size_t m : modes) {
      for (std::size_t n : modes) {
        const auto mixed = detail::difference(annihilate(create(probe, n).state, m),
                                              create(annihilate(probe, m), n).state);
        const auto expected = m == n ? probe : MultiModeState(universe, n_max);
        worst = std::max(worst, detail::difference(mixed, expected).norm());
        const auto lowers = detail::difference(annihilate(annihilate(probe, n), m), annihilate(annihilate(probe, m), n));
        worst = std::max(worst, lowers.norm());
      }
    }
  }
  ResidualReport r;
  r.check = "ladder_algebra";
  r.max_abs_residual = worst;
  r.tolerance = tolerance;
  r.params = {{"probes", static_cast<double>(probes)},
              {"n_max", static_cast<double>(n_max)},
              {"modes", static_cast<double>(modes.size())},
              {"seed", static_cast<double>(seed)}};
  return r.finalize();
}

/// E(|n_m⟩) - ZPE = n ħ ω_m for every mode and 1 <= n <= max_n, as a relative error.
inline ResidualReport check_spectrum(const UniversePtr& universe, const Medium& medium, unsigned max_n,
                                     double tolerance = 1e-13) {
  if (max_n < 1) throw std::invalid_argument("spectrum: max_n must be at least 1");
  double worst = 0.0;
  for (std::size_t m = 0; m < universe->size(); ++m) {
    for (unsigned n = 1; n <= max_n; ++n) {
      const auto report = energy_expectation(number_state(universe, max_n, m, n), medium, true);
      const double expected = n * medium.hbar() * universe->omega(m);
      worst = std::max(worst, std::abs((report.total - report.zero_point_energy) - expected) / expected);
    }
  }
  ResidualReport r;
  r.check = "spectrum";
  r.max_abs_residual = worst;
  r.tolerance = tolerance;
  r.params = {{"max_n", static_cast<double>(max_n)}, {"modes", static_cast<double>(universe->size())}};
  return r.finalize();
}

/// Mode-function ODE residuals at `samples` points spread over [-span/2, span/2]. The reported
/// residual is the analytic one; the central-difference residual is fitted for its order.
inline ResidualReport check_mode_ode(const Field1D& field, std::size_t samples, double span, bool flip_branch,
                                     double tolerance = 1e-14, double min_order = 1.9) {
  if (samples == 0) throw std::invalid_argument("mode_ode: need at least one sample point");
  const std::vector<double> dxs = halving_sequence(4e-3);
  double analytic = 0.0;
  std::vector<double> fd(dxs.size(), 0.0);
  const auto modes = enumerate_modes(field.grid());
  for (std::size_t s = 0; s < samples; ++s) {
    const double x = samples == 1 ? 0.0 : -0.5 * span + span * static_cast<double>(s) / (samples - 1);
    for (const ModeId& mode : modes) {
      for (std::size_t i = 0; i < dxs.size(); ++i) {
        const auto b = mode_ode_residuals(field, mode, x, dxs[i], flip_branch);
        if (i == 0) analytic = std::max({analytic, b.analytic_f, b.analytic_g});
        fd[i] = std::max({fd[i], b.fd_f, b.fd_g});
      }
    }
  }
  ResidualReport r;
  r.check = "mode_ode";
  r.max_abs_residual = analytic;
  r.tolerance = tolerance;
  r.order = fit_order(dxs, fd);
  r.min_order = min_order;
  r.spacings = dxs;
  r.params = {{"samples", static_cast<double>(samples)},
              {"span", span},
              {"flip_branch", flip_branch ? 1.0 : 0.0},
              {"fd_residual_finest", fd.back()}};
  return r.finalize();
}

/// Central-difference residuals of the 1D Maxwell pair in vector form,
///   ∂x E_λ + ∂t B'_λ = 0,   ∂x B'_λ + εμ ∂t E_λ = 0,   B'_λ = B·(x̂ × e_λ),
/// which covers left and right movers at once. Spacings are Δx = s·(2π/k) for s in
/// {base, base/2, base/4} with k the largest occupied wavenumber, and Δt = courant·Δx/v.
/// Residuals are relative to the largest derivative magnitude at the finest spacing.
struct MaxwellReports {
  ResidualReport faraday;
  ResidualReport ampere;
};

inline MaxwellReports check_maxwell_1d(const MultiModeState& state, const Field1D& field,
                                       const std::vector<double>& xs, const std::vector<double>& ts, double base,
                                       double courant, double tolerance = 1e-5, double min_order = 1.9) {
  if (xs.empty() || ts.empty()) throw std::invalid_argument("maxwell_1d: empty sampling window");
  if (!(courant > 0.0)) throw std::invalid_argument("maxwell_1d: courant number must be positive");
  field.require_compatible(state);
  require_normalized(state, "maxwell_1d");
  const Medium& md = field.medium();
  const double em = md.epsilon() * md.mu();
  const double wavelength = 2.0 * std::numbers::pi / detail::largest_wavenumber(state, field);
  const std::vector<double> factors = halving_sequence(base);
  const Vec3 x_hat{1.0, 0.0, 0.0};
  const std::array<Vec3, 2> e_dirs{field.basis().e1, field.basis().e2};
  const std::array<Vec3, 2> b_dirs{cross(x_hat, e_dirs[0]), cross(x_hat, e_dirs[1])};

  std::vector<double> spacings, faraday(factors.size(), 0.0), ampere(factors.size(), 0.0);
  double f_scale = 0.0, a_scale = 0.0;
  for (std::size_t level = 0; level < factors.size(); ++level) {
    const double dx = factors[level] * wavelength;
    const double dt = courant * dx / md.phase_speed();
    spacings.push_back(dx);
    for (double t : ts) {
      const FieldSnapshot1D now(field, evolve(state, md, t), t, false);
      const FieldSnapshot1D later(field, evolve(state, md, t + dt), t + dt, false);
      const FieldSnapshot1D earlier(field, evolve(state, md, t - dt), t - dt, false);
      for (double x : xs) {
        const FieldSample xp = now.at(x + dx), xm = now.at(x - dx);
        const FieldSample tp = later.at(x), tm = earlier.at(x);
        for (int l = 0; l < 2; ++l) {
          const double dx_e = (dot(xp.e_field, e_dirs[l]) - dot(xm.e_field, e_dirs[l])) / (2.0 * dx);
          const double dx_b = (dot(xp.b_field, b_dirs[l]) - dot(xm.b_field, b_dirs[l])) / (2.0 * dx);
          const double dt_e = (dot(tp.e_field, e_dirs[l]) - dot(tm.e_field, e_dirs[l])) / (2.0 * dt);
          const double dt_b = (dot(tp.b_field, b_dirs[l]) - dot(tm.b_field, b_dirs[l])) / (2.0 * dt);
          faraday[level] = std::max(faraday[level], std::abs(dx_e + dt_b));
          ampere[level] = std::max(ampere[level], std::abs(dx_b + em * dt_e));
          if (level + 1 == factors.size()) {
            f_scale = std::max({f_scale, std::abs(dx_e), std::abs(dt_b)});
            a_scale = std::max({a_scale, std::abs(dx_b), std::abs(em * dt_e)});
          }
        }
      }
    }
  }
  auto make = [&](const char* name, const std::vector<double>& res, double scale) {
    ResidualReport r;
    r.check = name;
    r.max_abs_residual = res.back();
    r.normalization = scale;
    r.tolerance = tolerance;
    r.min_order = min_order;
    r.spacings = spacings;
    std::vector<double> rel;
    for (double v : res) rel.push_back(scale > 0.0 ? v / scale : 0.0);
    r.order = fit_order(spacings, rel);
    r.params = {{"courant", courant}, {"base", base}, {"wavelength", wavelength},
                {"x_samples", static_cast<double>(xs.size())}, {"t_samples", static_cast<double>(ts.size())}};
    return r.finalize();
  };
  return {make("maxwell_1d.faraday", faraday, f_scale), make("maxwell_1d.ampere", ampere, a_scale)};
}

/// d⟨O⟩/dt by central difference against -(i/ħ)⟨[O, H]⟩ for O = E, B at each x.
/// The commutator is evaluated by applying ladder operators and H to the evolved state:
/// ⟨[a_j, H]⟩ = ⟨ψ|a_j H|ψ⟩ - ⟨ψ|H a_j|ψ⟩ and ⟨[a_j^†, H]⟩ = -conj⟨[a_j, H]⟩.
inline ResidualReport check_heisenberg(const MultiModeState& state, const Field1D& field,
                                       const std::vector<double>& xs, double t, double tau_base,
                                       double tolerance = 1e-4, double min_order = 1.9) {
  if (!(tau_base > 0.0)) throw std::invalid_argument("heisenberg: tau must be positive");
  if (xs.empty()) throw std::invalid_argument("heisenberg: no sample positions");
  field.require_compatible(state);
  require_normalized(state, "heisenberg");
  const Medium& md = field.medium();
  const MultiModeState psi = evolve(state, md, t);
  const MultiModeState h_psi = apply_hamiltonian(psi, md);
  const std::vector<std::size_t> modes = occupied_modes(psi);
  std::vector<Complex> comm(modes.size());
  for (std::size_t j = 0; j < modes.size(); ++j) {
    comm[j] = inner(psi, annihilate(h_psi, modes[j])) - inner(psi, apply_hamiltonian(annihilate(psi, modes[j]), md));
  }
  // rhs[x] = (E, B) derivatives from the commutator.
  std::vector<std::pair<Vec3, Vec3>> rhs(xs.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CVec3 de{}, db{};
    for (std::size_t j = 0; j < modes.size(); ++j) {
      const CVec3 fe = field.e_coefficient(modes[j], xs[i]);
      const CVec3 fb = field.b_coefficient(modes[j], xs[i]);
      const Complex up = comm[j];
      const Complex down = -std::conj(comm[j]);
      for (int c = 0; c < 3; ++c) {
        de[c] += fe[c] * up + std::conj(fe[c]) * down;
        db[c] += fb[c] * up + std::conj(fb[c]) * down;
      }
    }
    const Complex factor(0.0, -1.0 / md.hbar());
    Vec3 e, b;
    for (int c = 0; c < 3; ++c) {
      e[c] = (factor * de[c]).real();
      b[c] = (factor * db[c]).real();
    }
    rhs[i] = {e, b};
    scale = std::max({scale, detail::max_abs(e), detail::max_abs(b)});
  }
  const std::vector<double> taus = halving_sequence(tau_base);
  std::vector<double> residuals;
  for (double tau : taus) {
    const FieldSnapshot1D later(field, evolve(state, md, t + tau), t + tau, false);
    const FieldSnapshot1D earlier(field, evolve(state, md, t - tau), t - tau, false);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const FieldSample up = later.at(xs[i]), down = earlier.at(xs[i]);
      for (int c = 0; c < 3; ++c) {
        worst = std::max(worst, std::abs((up.e_field[c] - down.e_field[c]) / (2.0 * tau) - rhs[i].first[c]));
        worst = std::max(worst, std::abs((up.b_field[c] - down.b_field[c]) / (2.0 * tau) - rhs[i].second[c]));
      }
    }
    residuals.push_back(worst);
  }
  ResidualReport r;
  r.check = "heisenberg";
  r.max_abs_residual = residuals.back();
  r.normalization = scale;
  r.tolerance = tolerance;
  r.min_order = min_order;
  r.spacings = taus;
  std::vector<double> rel;
  for (double v : residuals) rel.push_back(scale > 0.0 ? v / scale : 0.0);
  r.order = fit_order(taus, rel);
  r.params = {{"t", t}, {"x_samples", static_cast<double>(xs.size())}, {"tau", tau_base}};
  return r.finalize();
}

/// Spatial energy quadrature of the 1D field over the discrete-orthogonality window
/// D = 2π/Δk, periodic trapezoid rule with `points_per_wavelength` nodes per shortest
/// wavelength. The first report compares A ∫ ½[ε⟨:E·E:⟩ + ⟨:B·B:⟩/μ] dx with Σ ħω⟨n⟩;
/// the second compares the vacuum part, summed mode by mode at every node, with Σ ½ħω.
struct EnergyReports {
  ResidualReport excitation;
  ResidualReport zero_point;
};

inline EnergyReports check_energy_equivalence(const MultiModeState& state, const Field1D& field,
                                              std::size_t points_per_wavelength = 64, double tolerance = 1e-8,
                                              double zpe_tolerance = 1e-10) {
  field.require_compatible(state);
  require_normalized(state, "energy_equivalence");
  const FrequencyGrid& grid = field.grid();
  if (!grid.is_commensurate()) {
    throw std::invalid_argument("energy_equivalence: omega_min/delta_omega = " + format_double(grid.offset_ratio()) +
                                " is not an integer, so the plane waves are not orthogonal over one window");
  }
  if (points_per_wavelength < 4) throw std::invalid_argument("energy_equivalence: need >= 4 points per wavelength");
  const Medium& md = field.medium();
  const double window = grid.orthogonality_length(md);
  const auto wavelengths = static_cast<std::size_t>(std::llround(grid.omega_max() / grid.delta_omega()));
  const std::size_t nodes = points_per_wavelength * wavelengths;
  const double h = window / static_cast<double>(nodes);
  const FieldSnapshot1D snap(field, state, 0.0, true);
  const std::size_t mode_count = field.universe()->size();
  std::vector<double> excitation(nodes), vac(nodes);
  parallel_for(nodes, [&](std::size_t i) {
    const double x = h * static_cast<double>(i);
    const auto [e2, b2] = snap.normal_ordered_squares(x);
    excitation[i] = 0.5 * (md.epsilon() * e2 + b2 / md.mu());
    double ve = 0.0, vb = 0.0;
    for (std::size_t j = 0; j < mode_count; ++j) {
      ve += norm_squared(field.e_coefficient(j, x));
      vb += norm_squared(field.b_coefficient(j, x));
    }
    vac[i] = 0.5 * (md.epsilon() * ve + vb / md.mu());
  });
  double q_exc = 0.0, q_vac = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    q_exc += excitation[i];
    q_vac += vac[i];
  }
  q_exc *= md.area() * h;
  q_vac *= md.area() * h;

  const EnergyReport energy = energy_expectation(state, md, true);
  EnergyReports out;
  ResidualReport& ex = out.excitation;
  ex.check = "energy_equivalence";
  ex.max_abs_residual = std::abs(q_exc - energy.excitation_energy);
  ex.normalization = energy.excitation_energy > 0.0 ? energy.excitation_energy : md.hbar() * grid.omega_max();
  ex.tolerance = tolerance;
  ex.spacings = {h};
  ex.params = {{"quadrature", q_exc},
               {"excitation_energy", energy.excitation_energy},
               {"window", window},
               {"nodes", static_cast<double>(nodes)},
               {"amplitude_scale", field.amplitude_scale()}};
  ex.finalize();
  ResidualReport& zp = out.zero_point;
  zp.check = "energy_equivalence.zpe";
  zp.max_abs_residual = std::abs(q_vac - energy.zero_point_energy);
  zp.normalization = energy.zero_point_energy;
  zp.tolerance = zpe_tolerance;
  zp.spacings = {h};
  zp.params = {{"quadrature", q_vac},
               {"zero_point_energy", energy.zero_point_energy},
               {"total_energy", energy.total},
               {"window", window}};
  zp.finalize();
  return out;
}

enum class Heading { Left, Right, None, Both };

inline Heading heading_of(const MultiModeState& state) {
  bool left = false, right = false;
  const auto& grid = state.universe().line_grid();
  if (!grid) throw std::invalid_argument("direction: state is not on a 1D frequency grid");
  for (std::size_t j : occupied_modes(state)) {
    (mode_at(*grid, j).direction == Direction::L ? left : right) = true;
  }
  if (left && right) return Heading::Both;
  if (left) return Heading::Left;
  return right ? Heading::Right : Heading::None;
}

/// Left movers: ⟨F⟩(x, t) = ⟨F⟩(x - δv, t + δ); right movers: ⟨F⟩(x, t) = ⟨F⟩(x + δv, t + δ),
/// for F = E, B. Mixed states are rejected.
inline ResidualReport check_direction(const MultiModeState& state, const Field1D& field,
                                      const std::vector<double>& xs, const std::vector<double>& deltas, double t,
                                      double tolerance = 1e-10) {
  field.require_compatible(state);
  require_normalized(state, "direction");
  const Heading heading = heading_of(state);
  if (heading == Heading::Both) {
    throw std::invalid_argument("direction: state excites both left and right movers");
  }
  const double sign = heading == Heading::Left ? -1.0 : 1.0;
  const double v = field.medium().phase_speed();
  const FieldSnapshot1D base(field, evolve(state, field.medium(), t), t, false);
  double worst = 0.0, scale = 0.0;
  for (double delta : deltas) {
    const FieldSnapshot1D shifted(field, evolve(state, field.medium(), t + delta), t + delta, false);
    for (double x : xs) {
      const FieldSample a = base.at(x);
      const FieldSample b = shifted.at(x + sign * delta * v);
      worst = std::max({worst, detail::max_abs(subtract(a.e_field, b.e_field)),
                        detail::max_abs(subtract(a.b_field, b.b_field))});
      scale = std::max({scale, detail::max_abs(a.e_field), detail::max_abs(a.b_field)});
    }
  }
  ResidualReport r;
  r.check = "direction";
  r.max_abs_residual = worst;
  r.normalization = scale;
  r.tolerance = tolerance;
  r.params = {{"heading", heading == Heading::Left ? -1.0 : (heading == Heading::Right ? 1.0 : 0.0)},
              {"deltas", static_cast<double>(deltas.size())},
              {"x_samples", static_cast<double>(xs.size())}};
  return r.finalize();
}

/// Builds the tensor-product coherent state at the given cap (truncation allowed) and checks
/// ⟨a_j⟩ = α_j and ⟨a_j^† a_j⟩ = |α_j|^2 relative to max(1, max |α|^2).
inline ResidualReport check_coherent_state(const UniversePtr& universe, unsigned n_max,
                                           const std::vector<std::pair<std::size_t, Complex>>& amplitudes,
                                           double tolerance = 1e-8) {
  const MultiModeState psi = coherent_state(universe, n_max, amplitudes, TruncationPolicy::Allow);
  double worst = 0.0, scale = 1.0;
  for (const auto& [mode, alpha] : amplitudes) {
    worst = std::max(worst, std::abs(inner(psi, annihilate(psi, mode)) - alpha));
    worst = std::max(worst, std::abs(number_expectation(psi, mode) - std::norm(alpha)));
    scale = std::max(scale, std::norm(alpha));
  }
  ResidualReport r;
  r.check = "coherent_state";
  r.max_abs_residual = worst;
  r.normalization = scale;
  r.tolerance = tolerance;
  r.params = {{"n_max", static_cast<double>(n_max)},
              {"modes", static_cast<double>(amplitudes.size())},
              {"cap_population", cap_population(psi)}};
  return r.finalize();
}

/// Orthonormality, transversality and handedness of the polarization rule on random k.
inline ResidualReport check_polarization_3d(std::size_t samples, std::uint64_t seed, double tolerance = 1e-13) {
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec3 k{rng.normal(), rng.normal(), rng.normal()};
    const auto [e1, e2] = polarization_basis(k);
    const Vec3 k_hat = normalize(k);
    worst = std::max({worst, std::abs(dot(e1, e1) - 1.0), std::abs(dot(e2, e2) - 1.0), std::abs(dot(e1, e2)),
                      std::abs(dot(k_hat, e1)), std::abs(dot(k_hat, e2)),
                      std::abs(dot(cross(e1, e2), k_hat) - 1.0)});
  }
  ResidualReport r;
  r.check = "polarization_3d";
  r.max_abs_residual = worst;
  r.tolerance = tolerance;
  r.params = {{"samples", static_cast<double>(samples)}, {"seed", static_cast<double>(seed)}};
  return r.finalize();
}

/// Divergence of ⟨E⟩ and ⟨B⟩ with h = s·(2π/k) for s in {base, base/2, base/4}.
inline ResidualReport check_divergence_3d(const MultiModeState& state, const Field3D& field,
                                          const std::vector<Vec3>& points, double t, double base,
                                          double tolerance = 1e-4, double min_order = 1.9) {
  if (points.empty()) throw std::invalid_argument("divergence_3d: no sample points");
  const double wavelength = 2.0 * std::numbers::pi / detail::largest_wavenumber(state, field);
  std::vector<double> hs, rel;
  DivergenceResult finest;
  for (double s : halving_sequence(base)) {
    hs.push_back(s * wavelength);
    finest = divergence_check(state, points, field, hs.back(), t);
    rel.push_back(finest.residual);
  }
  ResidualReport r;
  r.check = "divergence_3d";
  const bool e_worse = finest.grad_scale_e > 0.0 &&
                       (finest.grad_scale_b == 0.0 ||
                        finest.max_div_e / finest.grad_scale_e >= finest.max_div_b / finest.grad_scale_b);
  r.max_abs_residual = e_worse ? finest.max_div_e : finest.max_div_b;
  r.normalization = e_worse ? finest.grad_scale_e : finest.grad_scale_b;
  r.tolerance = tolerance;
  r.min_order = min_order;
  r.spacings = hs;
  r.order = fit_order(hs, rel);
  r.params = {{"t", t}, {"points", static_cast<double>(points.size())}, {"base", base}};
  return r.finalize();
}

/// Faraday and Ampère residuals with h = s·(2π/k) and τ = courant·h/v.
inline ResidualReport check_curl_3d(const MultiModeState& state, const Field3D& field,
                                    const std::vector<Vec3>& points, double t, double base, double courant,
                                    double tolerance = 1e-4, double min_order = 1.9) {
  if (points.empty()) throw std::invalid_argument("curl_3d: no sample points");
  if (!(courant > 0.0)) throw std::invalid_argument("curl_3d: courant number must be positive");
  const double wavelength = 2.0 * std::numbers::pi / detail::largest_wavenumber(state, field);
  std::vector<double> hs, rel;
  CurlResult finest;
  for (double s : halving_sequence(base)) {
    hs.push_back(s * wavelength);
    finest = curl_check(state, points, field, hs.back(), courant * hs.back() / field.medium().phase_speed(), t);
    const double rf = finest.faraday_scale > 0.0 ? finest.faraday / finest.faraday_scale : 0.0;
    const double ra = finest.ampere_scale > 0.0 ? finest.ampere / finest.ampere_scale : 0.0;
    rel.push_back(std::max(rf, ra));
  }
  ResidualReport r;
  r.check = "curl_3d";
  const double rf = finest.faraday_scale > 0.0 ? finest.faraday / finest.faraday_scale : 0.0;
  const double ra = finest.ampere_scale > 0.0 ? finest.ampere / finest.ampere_scale : 0.0;
  r.max_abs_residual = rf >= ra ? finest.faraday : finest.ampere;
  r.normalization = rf >= ra ? finest.faraday_scale : finest.ampere_scale;
  r.tolerance = tolerance;
  r.min_order = min_order;
  r.spacings = hs;
  r.order = fit_order(hs, rel);
  r.params = {{"t", t}, {"points", static_cast<double>(points.size())}, {"base", base}, {"courant", courant}};
  return r.finalize();
}

/// Box quadrature of the 3D field energy against Σ ħω⟨n⟩, and of the vacuum part against Σ ½ħω.
inline EnergyReports check_energy_3d(const MultiModeState& state, const Field3D& field, int points_per_axis,
                                     double tolerance = 1e-8, double zpe_tolerance = 1e-10) {
  const EnergyQuadrature q = energy_quadrature_3d(state, field, points_per_axis);
  const EnergyReport energy = hamiltonian_3d_expectation(state, field.medium());
  double omega_max = 0.0;
  for (double w : field.universe()->omegas()) omega_max = std::max(omega_max, w);
  EnergyReports out;
  ResidualReport& ex = out.excitation;
  ex.check = "energy_3d";
  ex.max_abs_residual = std::abs(q.normal_ordered - energy.excitation_energy);
  ex.normalization = energy.excitation_energy > 0.0 ? energy.excitation_energy : field.medium().hbar() * omega_max;
  ex.tolerance = tolerance;
  ex.params = {{"quadrature", q.normal_ordered},
               {"excitation_energy", energy.excitation_energy},
               {"points_per_axis", static_cast<double>(points_per_axis)},
               {"box_length", field.grid().box_length()}};
  ex.finalize();
  ResidualReport& zp = out.zero_point;
  zp.check = "energy_3d.zpe";
  zp.max_abs_residual = std::abs(q.vacuum - energy.zero_point_energy);
  zp.normalization = energy.zero_point_energy;
  zp.tolerance = zpe_tolerance;
  zp.params = {{"quadrature", q.vacuum}, {"zero_point_energy", energy.zero_point_energy}};
  zp.finalize();
  return out;
}

}  // namespace qfield
