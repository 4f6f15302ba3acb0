#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dipolesim/drive.hpp"
#include "dipolesim/geometry.hpp"
#include "dipolesim/observables.hpp"
#include "dipolesim/steady_state.hpp"

namespace dipolesim {

enum class GeometryKind { chain, ring, ring_pair };

struct GeometryConfig {
  GeometryKind kind = GeometryKind::chain;
  int n = 1;          // emitter count (chain/ring; ring_pair: driven ring)
  int n_second = 0;   // ring_pair: undriven ring count (0 = same as n)
  double spacing = 0.025;           // nearest-neighbor distance, λ₀
  Vec3 axis{0.0, 1.0, 0.0};         // chain axis
  Vec3 orientation{0.0, 0.0, 1.0};  // dipole orientation
  Vec3 normal{0.0, 0.0, 1.0};       // ring normal
  double center_separation = 0.7;   // ring_pair center distance, λ₀
  double tilt_angle = M_PI / 4.0;   // ring_pair plane tilt, radians
  double orientation_tilt_x = 0.0;  // ring_pair driven-ring dipole x component
};

// Laser detuning is either a fixed number or resolved against the collective
// single-excitation spectrum of the assembled geometry. When part of the
// array is tagged driven, targeting uses the driven sub-array's own spectrum
// (the laser is tuned to a mode of the ring it actually addresses).
enum class DetuningRule { fixed, superradiant, subradiant };

struct DriveConfig {
  double rabi = 1.0;  // Ω_p, Γ₀ units
  DetuningRule rule = DetuningRule::superradiant;
  double detuning = 0.0;              // Δ_p when rule == fixed
  Vec3 k_dir{0.0, 1.0, 0.0};          // propagation direction (scaled to k₀)
  CVec3 polarization{0.0, 0.0, 1.0};  // ε_p
  std::optional<Pulse> pulse;
};

struct DetectorConfig {
  double delta_phi = 0.01 * M_PI;  // detector half-width, radians
  double r_far = 100.0;            // detector distance, λ₀
  int n_quad = 9;                  // Simpson nodes per detector window
  int n_phi = 200;                 // scan grid over [−π, π)
  bool filtered = false;
  CVec3 filter_axis{0.0, 0.0, 1.0};
};

// Repeats the scenario over values of one scalar knob. Recognized variables:
// "rabi", "detuning", "n", "n_second", "spacing".
struct SweepConfig {
  std::string variable;
  std::vector<double> values;
};

struct DisorderConfig {
  std::vector<double> epsilons{0.0};  // displacement amplitudes, fraction of d
  int n_realizations = 1;
  std::uint64_t seed = 0;
};

struct SolverConfig {
  // "auto" picks null_space for D ≤ 40 and krylov above; the named methods
  // force the choice.
  std::string method = "auto";
  double tol = 0.0;  // steady-state residual target; 0 = library default
  double max_time = 2000.0;
};

struct TimeGridConfig {
  double t_final = 150.0;  // 1/Γ₀
  int n_samples = 151;
};

struct ScenarioConfig {
  std::string preset;
  GeometryConfig geometry;
  DriveConfig drive;
  int n_max = 2;
  DetectorConfig detector;
  std::optional<SweepConfig> sweep;
  std::optional<DisorderConfig> disorder;
  SolverConfig solver;
  TimeGridConfig time;  // pulsed presets
  int dispersion_k_points = 200;
  int threads = 0;  // 0 = DIPOLESIM_THREADS / hardware
};

// Rectangular numeric output, one CSV file per table.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ScenarioResult {
  std::vector<Table> tables;
  // Flat scalar metadata for the run summary (gamma_out, n_ex, detuning, ...).
  std::vector<std::pair<std::string, double>> summary;
  // Non-numeric context: solver method, per-point failures, skipped rows.
  std::vector<std::string> notes;
};

// The preset names understood by run_scenario, with one-line descriptions.
std::vector<std::pair<std::string, std::string>> preset_catalog();

// Fully-populated default configuration for a preset (the shipped figure
// parameters); unknown name raises invalid_argument_error.
ScenarioConfig preset_config(const std::string& preset);

// Dispatch over the presets. Deterministic for a fixed config (and seed,
// where disorder is involved).
ScenarioResult run_scenario(const ScenarioConfig& config);

struct RealizationRecord {
  std::uint64_t seed = 0;
  double gamma_out = 0.0;
  double g2 = 0.0;
  double phi_max = 0.0;
  double j_max = 0.0;
  bool ok = false;
  std::string error;
};

struct DisorderStats {
  double epsilon = 0.0;
  double mean_gamma_out = 0.0, std_gamma_out = 0.0;
  double mean_g2 = 0.0, std_g2 = 0.0;
  int n_ok = 0, n_failed = 0;
  std::vector<RealizationRecord> realizations;
};

// Monte Carlo over positional disorder for one (geometry, ε) cell. The drive
// detuning is frozen at the ordered-geometry value; each realization
// recomputes the emission argmax before evaluating g² there. Realizations
// that fail are recorded and excluded; more than 10% failures aborts with
// convergence_failure_error. Means use pairwise summation over the (index-
// ordered) realizations, so results do not depend on thread count.
DisorderStats disorder_average(const ScenarioConfig& config, double epsilon);

struct ModelComparisonRecord {
  double rabi = 0.0;
  double n_ex_truncated = 0.0, n_ex_full = 0.0;
  double gamma_out_truncated = 0.0, gamma_out_full = 0.0;
  std::vector<double> manifolds_truncated, manifolds_full;
  double n_ex_rel_dev = 0.0, gamma_out_rel_dev = 0.0;
};

// Paired truncated (n_max = 2) vs full (n_max = N) steady states across a
// drive sweep. N ≤ 6 (the full model is the resource bound, not the physics).
std::vector<ModelComparisonRecord> model_comparison(int n, double d,
                                                    const DriveConfig& drive,
                                                    const std::vector<double>& rabi_values,
                                                    const SolverConfig& solver = {});

}  // namespace dipolesim
