#pragma once

#include <Eigen/SparseCore>

#include "dipolesim/basis.hpp"
#include "dipolesim/couplings.hpp"
#include "dipolesim/csr.hpp"

namespace dipolesim {

// D²×D² generator with L·vec(ρ) = vec(dρ/dt). Vectorization is column-major
// (vec index of element (i,j) is j·D+i), so with K = H − (i/2)Σ Γ_ab σ⁺_aσ⁻_b,
//
//   L = −i (𝟙 ⊗ K) + i (conj(K) ⊗ 𝟙) + Σ_m g_m (conj(L_m) ⊗ L_m).
//
// Intended for the dense-factorization steady-state path, which is only
// viable for small systems; D above max_dim raises resource_limit_error.
Eigen::SparseMatrix<cplx> vectorized_liouvillian(const Basis& basis, const Csr& h,
                                                 const CouplingMatrices& couplings,
                                                 int max_dim = 60);

}  // namespace dipolesim
