#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "qfield/medium.hpp"

namespace qfield {

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buffer, end);
}

/// Uniform grid over the positive frequency axis: omega_m = omega_min + m * delta_omega.
class FrequencyGrid {
 public:
  FrequencyGrid(double omega_min, double delta_omega, std::size_t count)
      : omega_min_(omega_min), delta_omega_(delta_omega), count_(count) {
    if (!(omega_min > 0.0) || !std::isfinite(omega_min)) {
      throw std::invalid_argument("FrequencyGrid: omega_min must be positive (omega = 0 is excluded)");
    }
    if (!(delta_omega > 0.0) || !std::isfinite(delta_omega)) {
      throw std::invalid_argument("FrequencyGrid: delta_omega must be positive");
    }
    if (count == 0) {
      throw std::invalid_argument("FrequencyGrid: count must be at least 1");
    }
  }

  double omega_min() const { return omega_min_; }
  double delta_omega() const { return delta_omega_; }
  std::size_t count() const { return count_; }

  double omega(std::size_t m) const {
    if (m >= count_) {
      throw std::out_of_range("FrequencyGrid: frequency index out of range");
    }
    return omega_min_ + static_cast<double>(m) * delta_omega_;
  }
  double omega_max() const { return omega(count_ - 1); }

  /// Wavenumber spacing sqrt(epsilon mu) * delta_omega.
  double k_spacing(const Medium& medium) const { return medium.slowness() * delta_omega_; }

  /// Length D = 2 pi / delta_k over which all grid plane waves are mutually orthogonal,
  /// provided the grid is commensurate.
  double orthogonality_length(const Medium& medium) const {
    return 2.0 * std::numbers::pi / k_spacing(medium);
  }

  /// omega_min / delta_omega, the wavenumber of the first bin in units of delta_k.
  double offset_ratio() const { return omega_min_ / delta_omega_; }

  /// True when omega_min is an integer multiple of delta_omega, so every k_m * D is a
  /// multiple of 2 pi.
  bool is_commensurate() const {
    const double ratio = offset_ratio();
    return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio);
  }

  bool operator==(const FrequencyGrid&) const = default;

 private:
  double omega_min_;
  double delta_omega_;
  std::size_t count_;
};

enum class Direction : unsigned char { L = 0, R = 1 };
enum class Polarization : unsigned char { One = 1, Two = 2 };

inline char to_char(Direction d) { return d == Direction::L ? 'L' : 'R'; }
inline int to_int(Polarization p) { return static_cast<int>(p); }

/// 1D photon mode label. Ordered by (direction, polarization, freq_index).
struct ModeId {
  Direction direction = Direction::L;
  Polarization polarization = Polarization::One;
  std::size_t freq_index = 0;

  auto operator<=>(const ModeId&) const = default;
};

/// All 4 * count modes in canonical order L1, L2, R1, R2, each over increasing frequency.
inline std::vector<ModeId> enumerate_modes(const FrequencyGrid& grid) {
  std::vector<ModeId> modes;
  modes.reserve(4 * grid.count());
  for (Direction d : {Direction::L, Direction::R}) {
    for (Polarization p : {Polarization::One, Polarization::Two}) {
      for (std::size_t m = 0; m < grid.count(); ++m) {
        modes.push_back(ModeId{d, p, m});
      }
    }
  }
  return modes;
}

/// Position of `mode` in enumerate_modes(grid).
inline std::size_t mode_index(const FrequencyGrid& grid, const ModeId& mode) {
  if (mode.freq_index >= grid.count()) {
    throw std::out_of_range("mode_index: frequency index " + std::to_string(mode.freq_index) +
                            " outside grid of " + std::to_string(grid.count()) + " bins");
  }
  const std::size_t block = 2 * static_cast<std::size_t>(mode.direction) +
                            (mode.polarization == Polarization::One ? 0 : 1);
  return block * grid.count() + mode.freq_index;
}

inline ModeId mode_at(const FrequencyGrid& grid, std::size_t index) {
  if (index >= 4 * grid.count()) {
    throw std::out_of_range("mode_at: index outside mode universe");
  }
  const std::size_t block = index / grid.count();
  return ModeId{block < 2 ? Direction::L : Direction::R,
                block % 2 == 0 ? Polarization::One : Polarization::Two, index % grid.count()};
}

/// Report label, e.g. "L1@ω=0.5".
inline std::string mode_label(const FrequencyGrid& grid, const ModeId& mode) {
  std::string label;
  label += to_char(mode.direction);
  label += std::to_string(to_int(mode.polarization));
  label += "@ω=";
  label += format_double(grid.omega(mode.freq_index));
  return label;
}

/// Scale relating a delta-normalized continuum operator to the unit-commutator grid
/// operator of the same bin: a(omega_m) ~ a_m / sqrt(delta_omega).
inline double continuum_to_grid_amplitude(const FrequencyGrid& grid) {
  return 1.0 / std::sqrt(grid.delta_omega());
}

/// The finite set of bosonic modes a state lives on: a label and an angular frequency
/// per mode. 1D universes also remember their grid so ModeId lookups work.
class ModeUniverse {
 public:
  ModeUniverse(std::vector<std::string> labels, std::vector<double> omegas,
               std::optional<FrequencyGrid> line_grid = std::nullopt)
      : labels_(std::move(labels)), omegas_(std::move(omegas)), line_grid_(line_grid) {
    if (labels_.size() != omegas_.size()) {
      throw std::invalid_argument("ModeUniverse: label and frequency lists differ in length");
    }
    if (labels_.empty()) {
      throw std::invalid_argument("ModeUniverse: at least one mode is required");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!lookup_.emplace(labels_[i], i).second) {
        throw std::invalid_argument("ModeUniverse: duplicate mode label " + labels_[i]);
      }
      if (!(omegas_[i] >= 0.0) || !std::isfinite(omegas_[i])) {
        throw std::invalid_argument("ModeUniverse: mode frequencies must be finite and non-negative");
      }
    }
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  double omega(std::size_t i) const { return omegas_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& omegas() const { return omegas_; }
  const std::optional<FrequencyGrid>& line_grid() const { return line_grid_; }

  std::optional<std::size_t> find(const std::string& label) const {
    auto it = lookup_.find(label);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(const ModeId& mode) const {
    if (!line_grid_) {
      throw std::invalid_argument("ModeUniverse: ModeId lookup needs a 1D frequency-grid universe");
    }
    return mode_index(*line_grid_, mode);
  }

  bool operator==(const ModeUniverse& other) const {
    return labels_ == other.labels_ && omegas_ == other.omegas_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<double> omegas_;
  std::optional<FrequencyGrid> line_grid_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

using UniversePtr = std::shared_ptr<const ModeUniverse>;

inline UniversePtr make_universe(const FrequencyGrid& grid) {
  std::vector<std::string> labels;
  std::vector<double> omegas;
  for (const ModeId& mode : enumerate_modes(grid)) {
    labels.push_back(mode_label(grid, mode));
    omegas.push_back(grid.omega(mode.freq_index));
  }
  return std::make_shared<const ModeUniverse>(std::move(labels), std::move(omegas), grid);
}

/// Universe of `count` anonymous unit-frequency modes "m0", "m1", ... for algebra tests.
inline UniversePtr make_plain_universe(std::size_t count, double omega = 1.0) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < count; ++i) labels.push_back("m" + std::to_string(i));
  return std::make_shared<const ModeUniverse>(std::move(labels), std::vector<double>(count, omega));
}

}  // namespace qfield
