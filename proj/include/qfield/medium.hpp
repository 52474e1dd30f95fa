#pragma once

#include <cmath>
#include <stdexcept>

namespace qfield {

/// Homogeneous, non-dispersive, non-absorbing medium together with the unit
/// system (hbar) and the transverse quantization area used by the 1D field.
///
/// Immutable after construction. Every derived quantity is computed on demand.
class Medium {
 public:
  Medium(double epsilon, double mu, double hbar, double area)
      : epsilon_(epsilon), mu_(mu), hbar_(hbar), area_(area) {
    if (!(epsilon > 0.0) || !(mu > 0.0) || !(hbar > 0.0) || !(area > 0.0) ||
        !std::isfinite(epsilon) || !std::isfinite(mu) || !std::isfinite(hbar) ||
        !std::isfinite(area)) {
      throw std::invalid_argument("Medium: epsilon, mu, hbar and area must be finite and positive");
    }
    if (!std::isfinite(phase_speed())) {
      throw std::invalid_argument("Medium: phase speed 1/sqrt(epsilon*mu) is not finite");
    }
  }

  /// hbar = epsilon = mu = area = 1.
  static Medium natural() { return Medium(1.0, 1.0, 1.0, 1.0); }

  /// Vacuum in SI units (CODATA 2018), unit transverse area.
  static Medium si_vacuum(double area = 1.0) {
    return Medium(8.8541878128e-12, 1.25663706212e-6, 1.054571817e-34, area);
  }

  double epsilon() const { return epsilon_; }
  double mu() const { return mu_; }
  double hbar() const { return hbar_; }
  double area() const { return area_; }

  /// sqrt(epsilon * mu), the inverse phase speed.
  double slowness() const { return std::sqrt(epsilon_ * mu_); }
  double phase_speed() const { return 1.0 / slowness(); }

  bool operator==(const Medium&) const = default;

 private:
  double epsilon_;
  double mu_;
  double hbar_;
  double area_;
};

/// omega = k / sqrt(epsilon * mu).
inline double dispersion_omega(const Medium& medium, double k_magnitude) {
  if (!(k_magnitude >= 0.0)) {
    throw std::invalid_argument("dispersion_omega: wavenumber must be non-negative");
  }
  return k_magnitude / medium.slowness();
}

/// k = omega * sqrt(epsilon * mu).
inline double dispersion_k(const Medium& medium, double omega) {
  if (!(omega >= 0.0)) {
    throw std::invalid_argument("dispersion_k: angular frequency must be non-negative");
  }
  return omega * medium.slowness();
}

}  // namespace qfield
