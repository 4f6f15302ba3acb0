#pragma once

#include <cstdint>
#include <vector>

#include "dipolesim/vec3.hpp"

namespace dipolesim {

// A fixed configuration of two-level dipole emitters. Lengths are in units of
// the transition wavelength λ₀ (so k₀ = 2π/λ₀), rates in units of the single
// emitter decay rate Γ₀. `driven` lists the emitter indices the coherent
// drive couples to; empty means all of them.
struct EmitterArray {
  std::vector<Vec3> positions;     // λ₀ units
  std::vector<Vec3> orientations;  // unit dipole directions μ̂_i
  double gamma0 = 1.0;
  double lambda0 = 1.0;
  std::vector<int> driven;  // empty = every emitter is driven

  int size() const { return static_cast<int>(positions.size()); }
  double k0() const { return 2.0 * M_PI / lambda0; }
  bool is_driven(int j) const;
};

// Throws invalid_argument_error when the array violates its invariants
// (unit orientations within 1e-12, pairwise distinct positions, N >= 1).
void validate_array(const EmitterArray& array);

// Regular linear chain along `axis`, spacing d, common dipole orientation.
// Centered at the origin so mirror symmetries hold exactly.
EmitterArray make_chain(int n, double d, const Vec3& axis, const Vec3& orientation,
                        bool centered = true);

// Regular ring with nearest-neighbour chord d, i.e. radius R = d / (2 sin(π/n)),
// emitter j at angle φ_j = 2π(j−1)/n in the plane normal to `normal`.
EmitterArray make_ring(int n, double d, const Vec3& normal, const Vec3& orientation);

// Two rings: the driven ring in the xy-plane centered at the origin, the
// undriven ring center at (center_separation, 0, 0) with its plane rotated by
// tilt_angle about the y-axis through its center. Dipoles of the undriven
// ring stay along ẑ regardless of the tilt (only then is that ring decoupled
// from an in-plane circularly polarized drive); orientation_tilt_x tilts the
// driven ring's dipoles to normalize((ε, 0, 1)).
EmitterArray make_ring_pair(int n_driven, int n_undriven, double d,
                            double center_separation, double tilt_angle,
                            double orientation_tilt_x);

// Independent uniform displacements in [−d·ε, +d·ε] on x and y of every
// emitter (z untouched). Deterministic for a fixed seed. If a draw produces
// coincident emitters it is retried a bounded number of times.
EmitterArray apply_disorder(const EmitterArray& array, double epsilon, double d,
                            std::uint64_t seed);

}  // namespace dipolesim
