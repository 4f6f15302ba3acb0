#pragma once

#include <cmath>
#include <optional>

#include "dipolesim/errors.hpp"
#include "dipolesim/vec3.hpp"

namespace dipolesim {

// Gaussian envelope Ω_p(t) = amplitude * exp(-((t-center)/width)^2).
struct Pulse {
  double amplitude = 0.0;
  double center = 0.0;
  double width = 0.0;
};

// Coherent plane-wave drive in the frame rotating at the laser frequency.
// detuning is Δ_p = ω₀ − ω_p; a collective mode with shift J is resonantly
// driven at Δ_p = −J.
struct Drive {
  double rabi = 0.0;                   // Ω_p (Γ₀ units), full resonant Rabi rate
  double detuning = 0.0;               // Δ_p (Γ₀ units)
  Vec3 k_vec{0.0, 2.0 * M_PI, 0.0};    // |k| = 2π/λ₀; default along the chain axis ŷ
  CVec3 polarization{0.0, 0.0, 1.0};   // ε_p, complex unit vector
  std::optional<Pulse> pulse;

  bool time_dependent() const { return pulse.has_value(); }

  double envelope(double t) const {
    if (!pulse) return rabi;
    const double arg = (t - pulse->center) / pulse->width;
    return pulse->amplitude * std::exp(-arg * arg);
  }
};

inline void validate_drive(const Drive& drive) {
  if (std::abs(std::sqrt(drive.polarization.squared_norm()) - 1.0) > 1e-12)
    throw invalid_argument_error("drive polarization must be a unit vector");
  if (drive.pulse && drive.pulse->width <= 0.0)
    throw invalid_argument_error("pulse width must be positive");
}

}  // namespace dipolesim
