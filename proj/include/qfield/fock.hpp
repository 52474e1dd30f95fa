#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfield/modes.hpp"

namespace qfield {

using Complex = std::complex<double>;

/// Amplitudes with modulus below this are dropped after every operation.
inline constexpr double kPruneThreshold = 1e-15;

/// Sparse photon-number assignment: (mode index, count) pairs sorted by mode index,
/// zeros never stored.
class OccupationTuple {
 public:
  using Entry = std::pair<std::uint32_t, std::uint32_t>;

  OccupationTuple() = default;

  /// Accepts entries in any order; zero counts are dropped, repeated modes rejected.
  explicit OccupationTuple(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::erase_if(entries_, [](const Entry& e) { return e.second == 0; });
    std::sort(entries_.begin(), entries_.end());
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      if (entries_[i].first == entries_[i - 1].first) {
        throw std::invalid_argument("OccupationTuple: mode " + std::to_string(entries_[i].first) +
                                    " listed twice");
      }
    }
  }

  std::uint32_t count(std::size_t mode) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), mode,
                               [](const Entry& e, std::size_t m) { return e.first < m; });
    return (it != entries_.end() && it->first == mode) ? it->second : 0;
  }

  /// Copy with mode's count replaced.
  OccupationTuple with(std::size_t mode, std::uint32_t n) const {
    OccupationTuple out = *this;
    auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), mode,
                               [](const Entry& e, std::size_t m) { return e.first < m; });
    const auto key = static_cast<std::uint32_t>(mode);
    if (it != out.entries_.end() && it->first == key) {
      if (n == 0) {
        out.entries_.erase(it);
      } else {
        it->second = n;
      }
    } else if (n != 0) {
      out.entries_.insert(it, Entry{key, n});
    }
    return out;
  }

  std::uint32_t max_count() const {
    std::uint32_t best = 0;
    for (const auto& e : entries_) best = std::max(best, e.second);
    return best;
  }

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (const auto& e : entries_) sum += e.second;
    return sum;
  }

  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }

  auto operator<=>(const OccupationTuple&) const = default;

 private:
  std::vector<Entry> entries_;
};

/// Pure state (or unnormalized vector) on a truncated multimode Fock space.
///
/// The amplitude map is ordered, so iteration and every accumulation over it are
/// deterministic. Values are treated as immutable once built; operations return new
/// states.
class MultiModeState {
 public:
  using Amplitudes = std::map<OccupationTuple, Complex>;

  /// Zero vector.
  MultiModeState(UniversePtr universe, unsigned n_max) : universe_(std::move(universe)), n_max_(n_max) {
    if (!universe_) throw std::invalid_argument("MultiModeState: null mode universe");
    if (n_max_ < 1) throw std::invalid_argument("MultiModeState: n_max must be at least 1");
  }

  const ModeUniverse& universe() const { return *universe_; }
  const UniversePtr& universe_ptr() const { return universe_; }
  unsigned n_max() const { return n_max_; }
  const Amplitudes& amplitudes() const { return amplitudes_; }
  std::size_t size() const { return amplitudes_.size(); }
  bool is_zero() const { return amplitudes_.empty(); }

  /// Adds `value` to the amplitude of `tuple`; used while building states.
  void accumulate(const OccupationTuple& tuple, Complex value) {
    check_tuple(tuple);
    amplitudes_[tuple] += value;
  }

  Complex amplitude(const OccupationTuple& tuple) const {
    auto it = amplitudes_.find(tuple);
    return it == amplitudes_.end() ? Complex{} : it->second;
  }

  double norm_squared() const {
    double sum = 0.0;
    for (const auto& [tuple, amp] : amplitudes_) sum += std::norm(amp);
    return sum;
  }
  double norm() const { return std::sqrt(norm_squared()); }

  std::uint32_t max_occupation() const {
    std::uint32_t best = 0;
    for (const auto& [tuple, amp] : amplitudes_) best = std::max(best, tuple.max_count());
    return best;
  }

  void prune(double threshold = kPruneThreshold) {
    std::erase_if(amplitudes_, [threshold](const auto& kv) { return std::abs(kv.second) < threshold; });
  }

 private:
  void check_tuple(const OccupationTuple& tuple) const {
    for (const auto& [mode, n] : tuple.entries()) {
      if (mode >= universe_->size()) {
        throw std::out_of_range("MultiModeState: mode index " + std::to_string(mode) +
                                " outside universe of " + std::to_string(universe_->size()));
      }
      if (n > n_max_) {
        throw std::invalid_argument("MultiModeState: occupation " + std::to_string(n) +
                                    " exceeds cap n_max = " + std::to_string(n_max_));
      }
    }
  }

  UniversePtr universe_;
  unsigned n_max_;
  Amplitudes amplitudes_;
};

inline bool same_universe(const MultiModeState& a, const MultiModeState& b) {
  return a.universe_ptr() == b.universe_ptr() || a.universe() == b.universe();
}

inline void require_same_universe(const MultiModeState& a, const MultiModeState& b) {
  if (!same_universe(a, b)) {
    throw std::invalid_argument("states live on different mode universes");
  }
}

inline MultiModeState vacuum(UniversePtr universe, unsigned n_max) {
  MultiModeState state(std::move(universe), n_max);
  state.accumulate(OccupationTuple{}, 1.0);
  return state;
}

inline MultiModeState vacuum(const FrequencyGrid& grid, unsigned n_max) {
  return vacuum(make_universe(grid), n_max);
}

inline MultiModeState basis_state(UniversePtr universe, unsigned n_max, const OccupationTuple& tuple) {
  MultiModeState state(std::move(universe), n_max);
  state.accumulate(tuple, 1.0);
  return state;
}

/// |n⟩ in a single mode, vacuum elsewhere.
inline MultiModeState number_state(UniversePtr universe, unsigned n_max, std::size_t mode, std::uint32_t n) {
  return basis_state(std::move(universe), n_max,
                     OccupationTuple({{static_cast<std::uint32_t>(mode), n}}));
}

inline MultiModeState scaled(const MultiModeState& state, Complex factor) {
  MultiModeState out(state.universe_ptr(), state.n_max());
  for (const auto& [tuple, amp] : state.amplitudes()) out.accumulate(tuple, factor * amp);
  out.prune();
  return out;
}

/// a + b (same universe; the result keeps the larger cap).
inline MultiModeState superpose(const MultiModeState& a, const MultiModeState& b) {
  require_same_universe(a, b);
  MultiModeState out(a.universe_ptr(), std::max(a.n_max(), b.n_max()));
  for (const auto& [tuple, amp] : a.amplitudes()) out.accumulate(tuple, amp);
  for (const auto& [tuple, amp] : b.amplitudes()) out.accumulate(tuple, amp);
  out.prune();
  return out;
}

inline MultiModeState normalized(const MultiModeState& state) {
  const double n = state.norm();
  if (n == 0.0) throw std::domain_error("normalized: cannot normalize the zero vector");
  return scaled(state, 1.0 / n);
}

/// ⟨a|b⟩, conjugate-linear in the first argument.
inline Complex inner(const MultiModeState& a, const MultiModeState& b) {
  require_same_universe(a, b);
  Complex sum{};
  // Merge walk over both ordered maps.
  auto ia = a.amplitudes().begin();
  auto ib = b.amplitudes().begin();
  while (ia != a.amplitudes().end() && ib != b.amplitudes().end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum += std::conj(ia->second) * ib->second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

inline void require_mode(const MultiModeState& state, std::size_t mode) {
  if (mode >= state.universe().size()) {
    throw std::out_of_range("mode index " + std::to_string(mode) + " outside universe of " +
                            std::to_string(state.universe().size()) + " modes");
  }
}

/// Result of a creation operator: the (unnormalized) raised vector plus the squared
/// amplitude that fell above the cap and was dropped.
struct LadderResult {
  MultiModeState state;
  double truncation_loss = 0.0;
  double warn_threshold = 1e-10;

  bool truncation_warning() const { return truncation_loss > warn_threshold; }
};

/// a_m^† : |..n..⟩ -> sqrt(n+1) |..n+1..⟩, dropping tuples that would exceed n_max.
inline LadderResult create(const MultiModeState& state, std::size_t mode, double warn_threshold = 1e-10) {
  require_mode(state, mode);
  LadderResult result{MultiModeState(state.universe_ptr(), state.n_max()), 0.0, warn_threshold};
  for (const auto& [tuple, amp] : state.amplitudes()) {
    const std::uint32_t n = tuple.count(mode);
    const Complex raised = std::sqrt(static_cast<double>(n) + 1.0) * amp;
    if (n + 1 > state.n_max()) {
      result.truncation_loss += std::norm(raised);
      continue;
    }
    result.state.accumulate(tuple.with(mode, n + 1), raised);
  }
  result.state.prune();
  return result;
}

inline LadderResult create(const MultiModeState& state, const ModeId& mode, double warn_threshold = 1e-10) {
  return create(state, state.universe().index_of(mode), warn_threshold);
}

/// a_m : |..n..⟩ -> sqrt(n) |..n-1..⟩.
inline MultiModeState annihilate(const MultiModeState& state, std::size_t mode) {
  require_mode(state, mode);
  MultiModeState out(state.universe_ptr(), state.n_max());
  for (const auto& [tuple, amp] : state.amplitudes()) {
    const std::uint32_t n = tuple.count(mode);
    if (n == 0) continue;
    out.accumulate(tuple.with(mode, n - 1), std::sqrt(static_cast<double>(n)) * amp);
  }
  out.prune();
  return out;
}

inline MultiModeState annihilate(const MultiModeState& state, const ModeId& mode) {
  return annihilate(state, state.universe().index_of(mode));
}

/// Σ n_m |c|^2; the expectation of a_m^† a_m for a normalized state.
inline double number_expectation(const MultiModeState& state, std::size_t mode) {
  require_mode(state, mode);
  double sum = 0.0;
  for (const auto& [tuple, amp] : state.amplitudes()) sum += tuple.count(mode) * std::norm(amp);
  return sum;
}

/// Total probability carried by tuples with some mode sitting at the cap.
inline double cap_population(const MultiModeState& state) {
  double sum = 0.0;
  for (const auto& [tuple, amp] : state.amplitudes()) {
    if (tuple.max_count() >= state.n_max()) sum += std::norm(amp);
  }
  return sum;
}

/// ⟨probe| [a_a, a_b^†] |probe⟩. The identity [a_a, a_b^†] = δ_ab only holds on vectors
/// whose occupations stay strictly below the cap, so probes touching it are rejected.
inline Complex commutator_test(std::size_t mode_a, std::size_t mode_b, const MultiModeState& probe) {
  require_mode(probe, mode_a);
  require_mode(probe, mode_b);
  if (probe.max_occupation() >= probe.n_max()) {
    throw std::invalid_argument("commutator_test: probe occupies the truncation cap n_max = " +
                                std::to_string(probe.n_max()));
  }
  const MultiModeState forward = annihilate(create(probe, mode_b).state, mode_a);
  const MultiModeState backward = create(annihilate(probe, mode_a), mode_b).state;
  return inner(probe, forward) - inner(probe, backward);
}

inline Complex commutator_test(const ModeId& mode_a, const ModeId& mode_b, const MultiModeState& probe) {
  return commutator_test(probe.universe().index_of(mode_a), probe.universe().index_of(mode_b), probe);
}

}  // namespace qfield
