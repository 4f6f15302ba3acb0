#pragma once

#include <vector>

#include "dipolesim/couplings.hpp"
#include "dipolesim/dense.hpp"
#include "dipolesim/geometry.hpp"

namespace dipolesim {

// Single-excitation collective mode of Ω − iΓ/2. decay = −2·Im(eig), so a
// lone emitter gives decay Γ₀; shift = Re(eig) is the mode's frequency pull
// away from ω₀.
struct CollectiveMode {
  int label = 0;  // sort rank, or angular momentum m for ring modes
  double shift = 0.0;
  double decay = 0.0;
  Eigen::VectorXcd vector;
};

// Eigendecomposition of the N×N effective Hamiltonian Ω − iΓ/2, sorted by
// decay rate descending (ties: |shift| ascending). Vectors are normalized.
std::vector<CollectiveMode> effective_modes(const CouplingMatrices& couplings);

// Analytic angular-momentum mode of a regular ring: v_j = e^{imφ_j}/√N with
// eigenvalue −iΓ₀/2 + Σ_{j≥2} e^{im(φ_j−φ_1)}(Ω_1j − iΓ_1j/2). Valid m run
// over {0, ±1, ..., ±⌈(N−1)/2⌉}; couplings are rebuilt from the ring
// geometry. Throws invalid_argument_error for a non-ring array or m outside
// the allowed set.
CollectiveMode ring_mode(const EmitterArray& ring, int m);

enum class ModeSelection { most_superradiant, most_subradiant };

// Drive detuning that addresses the selected collective mode resonantly:
// Δ_p = −shift (ties between equal decay rates go to the smallest |shift|).
double target_detuning(const CouplingMatrices& couplings, ModeSelection which);

}  // namespace dipolesim
