#pragma once

#include <Eigen/Dense>

#include "dipolesim/geometry.hpp"

namespace dipolesim {

// Coherent (Ω_ij) and dissipative (Γ_ij) pair rates, both N×N real symmetric,
// in units of Γ₀. Calibration, with C = 3πΓ₀/k₀:
//
//   Ω_ij = −C · Re{ μ̂_i · G(r_i − r_j) · μ̂_j }      (i ≠ j),  Ω_ii = 0
//   Γ_ij = +2C · Im{ μ̂_i · G(r_i − r_j) · μ̂_j }     (i ≠ j),  Γ_ii = Γ₀
//
// The diagonal is fixed analytically: the Im part of μ̂·G·μ̂ tends to
// k₀/(6π) at zero separation, so 2C·k₀/(6π) = Γ₀ makes the matrix continuous
// in the coincidence limit, and the finite coherent self-shift is dropped as
// a global energy offset. Γ is positive semi-definite for physical geometries.
struct CouplingMatrices {
  Eigen::MatrixXd omega;
  Eigen::MatrixXd gamma;
  double gamma0 = 1.0;

  int size() const { return static_cast<int>(omega.rows()); }
};

CouplingMatrices coupling_matrices(const EmitterArray& array);

}  // namespace dipolesim
