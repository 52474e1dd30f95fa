#pragma once

#include <cmath>
#include <stdexcept>

#include "qfield/fock.hpp"
#include "qfield/medium.hpp"

namespace qfield {

/// Tolerance on | ||psi|| - 1 | accepted by functions that require a normalized state.
inline constexpr double kNormTolerance = 1e-8;

inline void require_normalized(const MultiModeState& state, const char* where) {
  const double deviation = std::abs(state.norm() - 1.0);
  if (!(deviation <= kNormTolerance)) {
    throw std::invalid_argument(std::string(where) + ": state is not normalized (| ||psi|| - 1 | = " +
                                format_double(deviation) + ")");
  }
}

struct EnergyReport {
  double excitation_energy = 0.0;  ///< Σ ħω_m ⟨n_m⟩
  double zero_point_energy = 0.0;  ///< Σ ½ħω_m over every mode of the finite universe
  double total = 0.0;
};

/// Σ_m ½ ħ ω_m. Finite only because the universe is finite.
inline double zero_point_energy(const ModeUniverse& universe, const Medium& medium) {
  double sum = 0.0;
  for (double omega : universe.omegas()) sum += 0.5 * medium.hbar() * omega;
  return sum;
}

/// Σ_m ω_m n_m for one basis tuple.
inline double tuple_frequency(const OccupationTuple& tuple, const ModeUniverse& universe) {
  double sum = 0.0;
  for (const auto& [mode, n] : tuple.entries()) sum += universe.omega(mode) * n;
  return sum;
}

inline double tuple_energy(const OccupationTuple& tuple, const ModeUniverse& universe, const Medium& medium) {
  return medium.hbar() * tuple_frequency(tuple, universe);
}

/// Excitation part of the field Hamiltonian, Σ ħω_m a_m^† a_m. The zero-point energy is a
/// scalar kept out of operator applications.
inline MultiModeState apply_hamiltonian(const MultiModeState& state, const Medium& medium) {
  MultiModeState out(state.universe_ptr(), state.n_max());
  for (const auto& [tuple, amp] : state.amplitudes()) {
    out.accumulate(tuple, tuple_energy(tuple, state.universe(), medium) * amp);
  }
  out.prune();
  return out;
}

inline EnergyReport energy_expectation(const MultiModeState& state, const Medium& medium, bool include_zpe = true) {
  require_normalized(state, "energy_expectation");
  EnergyReport report;
  for (const auto& [tuple, amp] : state.amplitudes()) {
    report.excitation_energy += tuple_energy(tuple, state.universe(), medium) * std::norm(amp);
  }
  if (include_zpe) report.zero_point_energy = zero_point_energy(state.universe(), medium);
  report.total = report.excitation_energy + report.zero_point_energy;
  return report;
}

/// Exact free evolution: each basis tuple picks up exp(-i Σ ω_m n_m t).
inline MultiModeState evolve(const MultiModeState& state, [[maybe_unused]] const Medium& medium, double t) {
  MultiModeState out(state.universe_ptr(), state.n_max());
  for (const auto& [tuple, amp] : state.amplitudes()) {
    const double phase = -tuple_frequency(tuple, state.universe()) * t;
    out.accumulate(tuple, amp * std::polar(1.0, phase));
  }
  return out;
}

}  // namespace qfield
