#pragma once

#include <Eigen/Dense>

#include "dipolesim/vec3.hpp"

namespace dipolesim {

// Free-space dyadic propagator at the transition frequency, in "Green-units":
// the overall field prefactor is 1, so G carries e^{ik₀r}/(4πr) and the
// near-field 1/(k₀r)², i/(k₀r) corrections.
//
//   G(r) = e^{iu}/(4πr) [ (𝟙 − r̂r̂) + (1/u² − i/u)(3 r̂r̂ − 𝟙) ],  u = k₀ r.
//
// The free-space dyadic is transpose-symmetric, G = Gᵀ.
struct GreensTensor {
  Eigen::Matrix3cd value;
};

// Throws singular_input_error at r = 0 (the self-term is handled analytically
// where coupling matrices are assembled).
GreensTensor greens_tensor(const Vec3& r, double k0);

// μ̂_i · G(r) · μ̂_j without building the 3×3 matrix; the hot path for
// coupling assembly and lattice sums.
cplx mu_g_mu(const Vec3& r, const Vec3& mu_i, const Vec3& mu_j, double k0);

}  // namespace dipolesim
