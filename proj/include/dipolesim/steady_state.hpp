#pragma once

#include <string>

#include "dipolesim/master.hpp"

namespace dipolesim {

enum class SteadyStateMethod {
  integration,  // evolve from the ground state until the residual drops
  null_space,   // kernel of the vectorized generator (small systems only)
  krylov,       // preconditioned GMRES on the trace-pinned generator
};

std::string to_string(SteadyStateMethod method);
SteadyStateMethod steady_state_method_from_string(const std::string& name);

struct SteadyStateOptions {
  SteadyStateMethod method = SteadyStateMethod::integration;
  // Convergence target on ‖dρ/dt‖_F; 0 means the default 1e-10·Γ₀·D.
  double tol = 0.0;
  // integration: time horizon (1/Γ₀) and step budget.
  double max_time = 2000.0;
  long max_steps = 2000000;
  // krylov: subspace size per restart cycle and number of cycles.
  int restart = 60;
  int max_restarts = 60;
  // null_space: largest admissible D for the dense factorization.
  int null_space_max_dim = 60;
};

struct SteadyStateReport {
  DensityState state;
  SteadyStateMethod method = SteadyStateMethod::integration;
  double residual = 0.0;  // ‖dρ/dt‖_F of the returned state, Γ₀ units
  long iterations = 0;    // accepted steps / inverse iterations / matvecs
};

// Solves dρ/dt = 0 for a time-independent drive (a pulse raises
// invalid_argument_error). All methods converge to the same state; they
// differ in cost envelope:
//  - integration is robust but slow when subradiant modes relax slowly,
//  - null_space factorizes the D²×D² generator (D ≤ null_space_max_dim),
//  - krylov solves L(ρ) + Γ₀·tr(ρ)|g⟩⟨g| = Γ₀|g⟩⟨g| by restarted GMRES,
//    right-preconditioned with the exact inverse of the no-jump part
//    (drive included), and scales to the largest systems this library
//    handles.
// Non-convergence raises convergence_failure_error quoting the residual.
SteadyStateReport steady_state(const MasterEquation& eq,
                               const SteadyStateOptions& opts = {});

}  // namespace dipolesim
