#pragma once

#include "dipolesim/basis.hpp"
#include "dipolesim/couplings.hpp"
#include "dipolesim/csr.hpp"
#include "dipolesim/drive.hpp"
#include "dipolesim/geometry.hpp"

namespace dipolesim {

// Per-emitter drive amplitudes d_j = (ε_p·μ̂_j) e^{−i k·r_j}, zeroed for
// emitters outside the driven set.
std::vector<cplx> drive_amplitudes(const EmitterArray& array, const Drive& drive);

// Unit-Rabi Hermitian drive operator W = Σ_j (d_j σ⁺_j + d̄_j σ⁻_j), projected
// onto the truncated space (couplings out of the top manifold are dropped).
Csr drive_operator(const Basis& basis, const EmitterArray& array, const Drive& drive);

// H₀ = Δ_p Σ_j σ⁺_jσ⁻_j + Σ_{i≠j} Ω_ij σ⁺_iσ⁻_j.
Csr static_hamiltonian(const Basis& basis, const CouplingMatrices& couplings,
                       double detuning);

// Full H(t) = H₀ + (Ω_p(t)/2) W. The factor 1/2 makes Ω_p the resonant Rabi
// rate of a single emitter: its steady state then satisfies
// ρ_ee = Ω_p² / (4Δ_p² + Γ₀² + 2Ω_p²).
Csr hamiltonian(const EmitterArray& array, const CouplingMatrices& couplings,
                const Basis& basis, const Drive& drive, double t);

}  // namespace dipolesim
