#pragma once

#include "dipolesim/basis.hpp"
#include "dipolesim/csr.hpp"

namespace dipolesim {

// σ⁻ of emitter j (0-based) in the canonical basis. Maps the n-excitation
// block to the (n−1) block; exact within the truncated space (lowering never
// leaves it).
Csr lowering_operator(const Basis& basis, int j);

// Weighted sum Σ_j w_j σ⁻_j assembled in one pass (jump operators, detector
// operators).
Csr weighted_lowering_sum(const Basis& basis, const std::vector<cplx>& weights);

// Σ_j σ⁺_jσ⁻_j (diagonal in the canonical basis).
Csr number_operator(const Basis& basis);

// Σ_{ij} M_ij σ⁺_iσ⁻_j for a complex N×N coefficient matrix; the workhorse
// for Hamiltonian / damping assembly.
Csr quadratic_operator(const Basis& basis, const Dense& m);

}  // namespace dipolesim
