#pragma once

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qfield/config.hpp"
#include "qfield/fock.hpp"
#include "qfield/hamiltonian.hpp"
#include "qfield/maxwell3d.hpp"
#include "qfield/observables.hpp"
#include "qfield/state_json.hpp"
#include "qfield/verify.hpp"

namespace qfield {

/// Mode universe, fields and helpers derived from one RunConfig.
class Workspace {
 public:
  explicit Workspace(RunConfig config) : config_(std::move(config)) {
    if (config_.line) {
      line_.emplace(config_.medium, *config_.line);
      universe_ = line_->universe();
    } else if (config_.lattice) {
      lattice_.emplace(config_.medium, *config_.lattice);
      universe_ = lattice_->universe();
    } else {
      throw std::invalid_argument("config declares neither a 1D grid nor a 3D lattice");
    }
  }

  const RunConfig& config() const { return config_; }
  const UniversePtr& universe() const { return universe_; }
  const Field1D& line_field() const { return *line_; }
  const Field3D& lattice_field() const { return *lattice_; }

  std::size_t index_of(const ModeRef& mode) const {
    if (const auto* id = std::get_if<ModeId>(&mode)) return universe_->index_of(*id);
    return config_.lattice->index_of(std::get<LatticeMode>(mode));
  }

  OccupationTuple tuple_of(const std::vector<Occupation>& occupations) const {
    std::vector<OccupationTuple::Entry> entries;
    for (const auto& o : occupations) entries.emplace_back(static_cast<std::uint32_t>(index_of(o.mode)), o.count);
    return OccupationTuple(std::move(entries));
  }

  std::vector<std::pair<std::size_t, Complex>> amplitudes_of(const StateSpec& spec) const {
    std::vector<std::pair<std::size_t, Complex>> out;
    for (const auto& a : spec.amplitudes) out.emplace_back(index_of(a.mode), a.alpha);
    return out;
  }

  MultiModeState build_state(const StateSpec& spec, unsigned n_max,
                             TruncationPolicy policy = TruncationPolicy::Reject) const {
    switch (spec.kind) {
      case StateKind::Vacuum:
        return vacuum(universe_, n_max);
      case StateKind::Fock:
        return basis_state(universe_, n_max, tuple_of(spec.occupations));
      case StateKind::Coherent:
        return coherent_state(universe_, n_max, amplitudes_of(spec), policy);
      case StateKind::Superposition: {
        MultiModeState sum(universe_, n_max);
        for (const auto& term : spec.terms) sum.accumulate(tuple_of(term.occupations), term.weight);
        sum.prune();
        if (sum.is_zero()) throw std::invalid_argument("superposition has zero norm");
        return normalized(sum);
      }
    }
    throw std::logic_error("unknown state kind");
  }

  MultiModeState main_state() const { return build_state(config_.state, config_.n_max); }

 private:
  RunConfig config_;
  std::optional<Field1D> line_;
  std::optional<Field3D> lattice_;
  UniversePtr universe_;
};

struct SuiteResult {
  std::vector<ResidualReport> reports;
  bool pass = true;
};

namespace detail {

inline std::vector<std::size_t> spread_modes(std::size_t universe_size, std::size_t count) {
  if (count == 0 || count > universe_size) {
    throw std::invalid_argument("ladder_algebra: modes must be between 1 and the number of modes (" +
                                std::to_string(universe_size) + ")");
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(count == 1 ? 0 : i * (universe_size - 1) / (count - 1));
  return out;
}

inline std::vector<ResidualReport> run_check(const Workspace& ws, const CheckSpec& spec) {
  const RunConfig& cfg = ws.config();
  const CheckInfo& info = *find_check(spec.name);
  const double tol = spec.tolerance.value_or(info.tolerance);
  const double min_order = spec.min_order.value_or(info.min_order.value_or(0.0));
  const StateSpec& state_spec = spec.state ? *spec.state : cfg.state;
  const unsigned n_max = spec.n_max.value_or(cfg.n_max);
  auto opt = [&](const char* key) { return check_option(spec, key); };
  auto state = [&] { return ws.build_state(state_spec, n_max); };
  const auto xs = cfg.sampling.x.values();
  const auto ts = cfg.sampling.t.values();

  if (spec.name == "ladder_algebra") {
    const auto modes = spread_modes(ws.universe()->size(), static_cast<std::size_t>(opt("modes")));
    return {check_ladder_algebra(ws.universe(), spec.n_max.value_or(5), modes,
                                 static_cast<std::size_t>(opt("probes")), cfg.seed, tol)};
  }
  if (spec.name == "spectrum") {
    return {check_spectrum(ws.universe(), cfg.medium, static_cast<unsigned>(opt("max_n")), tol)};
  }
  if (spec.name == "mode_ode") {
    return {check_mode_ode(ws.line_field(), static_cast<std::size_t>(opt("samples")), opt("span"),
                           opt("flip_branch") != 0.0, tol, min_order)};
  }
  if (spec.name == "maxwell_1d") {
    const auto r = check_maxwell_1d(state(), ws.line_field(), xs, ts, opt("base"), opt("courant"), tol, min_order);
    return {r.faraday, r.ampere};
  }
  if (spec.name == "heisenberg") {
    return {check_heisenberg(state(), ws.line_field(), xs, opt("t"), opt("tau"), tol, min_order)};
  }
  if (spec.name == "energy_equivalence") {
    const Field1D field(cfg.medium, *cfg.line, {}, opt("k_scale"));
    const auto r = check_energy_equivalence(state(), field, static_cast<std::size_t>(opt("points_per_wavelength")),
                                            tol, opt("zpe_tolerance"));
    return {r.excitation, r.zero_point};
  }
  if (spec.name == "direction") {
    const double d = opt("delta");
    return {check_direction(state(), ws.line_field(), xs, {0.25 * d, 0.5 * d, d}, ts.front(), tol)};
  }
  if (spec.name == "coherent_state") {
    if (state_spec.kind != StateKind::Coherent) {
      throw std::invalid_argument("coherent_state check needs a coherent state spec");
    }
    return {check_coherent_state(ws.universe(), n_max, ws.amplitudes_of(state_spec), tol)};
  }
  if (spec.name == "polarization_3d") {
    return {check_polarization_3d(static_cast<std::size_t>(opt("samples")), cfg.seed, tol)};
  }
  if (spec.name == "divergence_3d") {
    return {check_divergence_3d(state(), ws.lattice_field(), cfg.sampling.r, ts.front(), opt("base"), tol,
                                min_order)};
  }
  if (spec.name == "curl_3d") {
    return {check_curl_3d(state(), ws.lattice_field(), cfg.sampling.r, ts.front(), opt("base"), opt("courant"), tol,
                          min_order)};
  }
  if (spec.name == "energy_3d") {
    int ppa = static_cast<int>(opt("points_per_axis"));
    if (ppa == 0) ppa = 4 * cfg.lattice->half_extent() + 4;
    const auto r = check_energy_3d(state(), ws.lattice_field(), ppa, tol, opt("zpe_tolerance"));
    return {r.excitation, r.zero_point};
  }
  throw std::invalid_argument("unknown check '" + spec.name + "'");
}

}  // namespace detail

/// Runs every configured check in order and sorts the reports by check name (stable, so
/// repeated checks keep their config order). Errors raised while preparing a check carry the
/// check's position in the config.
inline SuiteResult run_suite(const RunConfig& config) {
  const Workspace ws(config);
  SuiteResult result;
  for (std::size_t i = 0; i < config.checks.size(); ++i) {
    try {
      for (auto& r : detail::run_check(ws, config.checks[i])) result.reports.push_back(std::move(r));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("/checks/" + std::to_string(i) + " (" + config.checks[i].name + "): " + e.what());
    }
  }
  std::stable_sort(result.reports.begin(), result.reports.end(),
                   [](const ResidualReport& a, const ResidualReport& b) { return a.check < b.check; });
  for (const auto& r : result.reports) result.pass = result.pass && r.pass;
  return result;
}

inline Json report_to_json(const ResidualReport& r) {
  Json j;
  j["check"] = r.check;
  j["pass"] = r.pass;
  j["max_abs_residual"] = r.max_abs_residual;
  j["normalization"] = r.normalization;
  j["relative_residual"] = r.relative();
  j["tolerance"] = r.tolerance;
  j["order"] = r.order ? Json(*r.order) : Json(nullptr);
  j["min_order"] = r.min_order ? Json(*r.min_order) : Json(nullptr);
  j["spacings"] = r.spacings;
  j["params"] = r.params;
  return j;
}

inline Json suite_to_json(const SuiteResult& result) {
  Json checks = Json::array();
  for (const auto& r : result.reports) checks.push_back(report_to_json(r));
  return {{"pass", result.pass}, {"checks", checks}};
}

/// Field profile over the configured sampling window as CSV.
inline void write_simulation(std::ostream& out, const RunConfig& config) {
  const Workspace ws(config);
  const MultiModeState psi = ws.main_state();
  const auto ts = config.sampling.t.values();
  if (config.line) {
    write_profile_csv(out, field_profile(psi, config.sampling.x.values(), ts, ws.line_field(),
                                         config.sampling.with_squares),
                      config.sampling.with_squares);
  } else {
    write_profile_csv(out, field_profile_3d(psi, config.sampling.r, ts, ws.lattice_field(),
                                            config.sampling.with_squares),
                      config.sampling.with_squares, true);
  }
}

/// One row per mode: index, label, direction or lattice coordinates, polarization, ω, |k|,
/// and the per-mode field amplitude |f|.
inline void write_mode_table(std::ostream& out, const RunConfig& config) {
  const Workspace ws(config);
  const auto& u = *ws.universe();
  if (config.line) {
    const Field1D& field = ws.line_field();
    out << "index,label,direction,polarization,omega,k,abs_f\n";
    for (std::size_t i = 0; i < u.size(); ++i) {
      const ModeId m = mode_at(*config.line, i);
      out << i << ',' << u.label(i) << ',' << to_char(m.direction) << ',' << to_int(m.polarization) << ','
          << csv_number(u.omega(i)) << ',' << csv_number(field.wavenumber(m.freq_index)) << ','
          << csv_number(field.mode_amplitude(m.freq_index)) << '\n';
    }
  } else {
    const Field3D& field = ws.lattice_field();
    out << "index,label,k_x,k_y,k_z,polarization,omega,k,abs_f\n";
    for (std::size_t i = 0; i < u.size(); ++i) {
      const LatticeMode m = config.lattice->mode_at(i);
      const Vec3 k = config.lattice->wavevector(m.k);
      out << i << ',' << u.label(i) << ',' << csv_number(k[0]) << ',' << csv_number(k[1]) << ','
          << csv_number(k[2]) << ',' << to_int(m.polarization) << ',' << csv_number(u.omega(i)) << ','
          << csv_number(length(k)) << ',' << csv_number(field.mode_amplitude(i)) << '\n';
    }
  }
}

/// Occupancy statistics of the configured state plus its serialized form.
inline Json describe_state(const RunConfig& config) {
  const Workspace ws(config);
  const MultiModeState psi = ws.main_state();
  const EnergyReport energy = energy_expectation(psi, config.medium, true);
  Json modes = Json::array();
  double photons = 0.0;
  for (std::size_t j : occupied_modes(psi)) {
    const double n = number_expectation(psi, j);
    photons += n;
    modes.push_back({{"index", j}, {"label", psi.universe().label(j)}, {"mean_occupation", n}});
  }
  return {{"n_max", psi.n_max()},
          {"basis_terms", psi.size()},
          {"norm", psi.norm()},
          {"max_occupation", psi.max_occupation()},
          {"cap_population", cap_population(psi)},
          {"mean_photon_number", photons},
          {"excitation_energy", energy.excitation_energy},
          {"zero_point_energy", energy.zero_point_energy},
          {"modes", modes},
          {"state", state_to_json(psi)}};
}

/// Built-in 1D configuration used when no --config is given: a unit-amplitude left-moving
/// coherent state at ω = 1 on an eight-frequency grid, with every 1D check.
inline const char* default_config_text() {
  return R"({
  "medium": {"epsilon": 1, "mu": 1, "hbar": 1, "area": 1},
  "grid": {"omega_min": 1, "delta_omega": 1, "count": 8},
  "n_max": 20,
  "seed": 20240611,
  "state": {
    "kind": "coherent",
    "amplitudes": [{"mode": {"direction": "L", "polarization": 1, "index": 0}, "re": 1, "im": 0}]
  },
  "sampling": {
    "x": {"start": 0, "stop": 6.283185307179586, "count": 9},
    "t": {"start": 0, "stop": 0.5, "count": 3},
    "with_squares": true
  },
  "checks": [
    {"name": "ladder_algebra", "n_max": 5},
    {"name": "spectrum"},
    {"name": "mode_ode"},
    {"name": "maxwell_1d"},
    {"name": "heisenberg"},
    {"name": "heisenberg", "n_max": 3, "state": {"kind": "superposition", "terms": [
      {"re": 1, "im": 0, "occupations": []},
      {"re": 0.6, "im": 0.2, "occupations": [{"mode": {"direction": "R", "polarization": 2, "index": 2}, "count": 1}]},
      {"re": 0.3, "im": -0.4, "occupations": [{"mode": {"direction": "L", "polarization": 1, "index": 1}, "count": 2}]}
    ]}},
    {"name": "energy_equivalence"},
    {"name": "direction"},
    {"name": "coherent_state"},
    {"name": "polarization_3d"}
  ]
})";
}

}  // namespace qfield
