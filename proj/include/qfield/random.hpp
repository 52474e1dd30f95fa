#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qfield/fock.hpp"

namespace qfield {

/// Seeded generator whose draws are identical on every platform: std::mt19937_64 output
/// mapped to doubles by hand instead of through the unspecified std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex complex_normal() { return {normal(), normal()}; }

 private:
  std::mt19937_64 engine_;
};

/// Normalized state with complex Gaussian amplitudes on every tuple of `modes` whose
/// occupations are all <= max_occupation.
inline MultiModeState random_state(UniversePtr universe, unsigned n_max, const std::vector<std::size_t>& modes,
                                   unsigned max_occupation, Rng& rng) {
  MultiModeState state(universe, n_max);
  std::vector<std::uint32_t> counts(modes.size(), 0);
  for (;;) {
    std::vector<OccupationTuple::Entry> entries;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      entries.emplace_back(static_cast<std::uint32_t>(modes[i]), counts[i]);
    }
    state.accumulate(OccupationTuple(entries), rng.complex_normal());
    std::size_t pos = 0;
    while (pos < counts.size() && counts[pos] == max_occupation) counts[pos++] = 0;
    if (pos == counts.size()) break;
    ++counts[pos];
  }
  return normalized(state);
}

}  // namespace qfield
