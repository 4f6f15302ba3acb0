#pragma once

#include <vector>

#include "dipolesim/master.hpp"

namespace dipolesim {

struct IntegratorOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  // Snapshot times, strictly increasing within [t0, t1]; empty means "final
  // state only". Steps are clipped so every sample time is hit exactly.
  std::vector<double> sample_times;
  long max_steps = 2000000;
  // When > 0, stop as soon as ‖dρ/dt‖_F drops below this value (steady-state
  // driver); the state at that moment becomes the final snapshot.
  double stop_below_residual = 0.0;
  double max_step = 0.0;      // > 0: upper bound on the step size
  double initial_step = 0.0;  // > 0: overrides the automatic choice
};

struct IntegrationStats {
  long steps_accepted = 0;
  long steps_rejected = 0;
  long rhs_evaluations = 0;
  // Σ|tr(ρ)−1| removed by per-step renormalization.
  double trace_correction = 0.0;
  double final_residual = 0.0;  // ‖dρ/dt‖_F at the final state
  bool stopped_on_residual = false;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Dense> states;
  IntegrationStats stats;

  const Dense& final_state() const { return states.back(); }
};

// Adaptive embedded Runge–Kutta 5(4) integration (Dormand–Prince pair, FSAL)
// of dρ/dt from t0 to t1. Error control uses a weighted RMS norm with the
// given tolerances. After every accepted step the state is re-Hermitized and
// trace-renormalized; a single-step trace drift above 1e-6 raises
// integration_failure_error, step-size underflow raises stiffness_error.
Trajectory evolve(const MasterEquation& eq, const DensityState& initial,
                  double t0, double t1, const IntegratorOptions& opts = {});

}  // namespace dipolesim
