#pragma once

#include "dipolesim/dense.hpp"
#include "dipolesim/vec3.hpp"

namespace dipolesim {

// Complex band energy ω(k) − ω₀ (Γ₀ units) of an infinite chain with lattice
// constant d (λ₀ units) and uniform dipole orientation, for quasi-momentum
// k ∈ [0, π/d] along the chain (1/λ₀ units, light line at k₀ = 2π).
//
// The lattice sum Σ_{j≠0} e^{−ikdj} μ̂·G(jd)·μ̂ decomposes into polylog-type
// series Σ_j e^{iθj}/j^p (p = 1,2,3) at θ = (k₀±k)d; these are summed
// directly up to an adaptive cutoff and the remainder is accelerated by
// repeated summation by parts, which turns the slowly decaying 1/j tail into
// a rapidly converging one away from θ = 0. At θ = 0 the p = 1 series
// diverges: that is the physical light-line divergence, reported as
// convergence_failure_error when the transverse weight is nonzero.
// Shift = Re, decay = −2·Im (the −iΓ₀/2 self term is included).
cplx chain_dispersion(double k, double d, const Vec3& orientation,
                      long j_max = 1000000, double tol = 1e-10);

// Quasi-momentum assignment for a finite open chain: overlap of a
// single-excitation eigenvector with the standing-wave ansatz
// sin(k_m d (j+1)), k_m = mπ/((N+1)d), maximized over m = 1..N.
struct QuasiMomentum {
  double k = 0.0;      // 1/λ₀ units
  double overlap = 0;  // |⟨ansatz|mode⟩| with both normalized, in [0,1]
};
QuasiMomentum assign_quasi_momentum(const Eigen::VectorXcd& mode, double d);

}  // namespace dipolesim
