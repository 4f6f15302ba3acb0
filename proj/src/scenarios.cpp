#include "dipolesim/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "dipolesim/basis.hpp"
#include "dipolesim/couplings.hpp"
#include "dipolesim/dispersion.hpp"
#include "dipolesim/eigenmodes.hpp"
#include "dipolesim/errors.hpp"
#include "dipolesim/integrator.hpp"
#include "dipolesim/master.hpp"
#include "dipolesim/parallel.hpp"
#include "dipolesim/rng.hpp"

namespace dipolesim {

namespace {

constexpr int kBasisBudget = 4096;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

EmitterArray build_geometry(const GeometryConfig& g) {
  switch (g.kind) {
    case GeometryKind::chain:
      return make_chain(g.n, g.spacing, g.axis, g.orientation);
    case GeometryKind::ring:
      return make_ring(g.n, g.spacing, g.normal, g.orientation);
    case GeometryKind::ring_pair: {
      const int n_second = g.n_second > 0 ? g.n_second : g.n;
      return make_ring_pair(g.n, n_second, g.spacing, g.center_separation,
                            g.tilt_angle, g.orientation_tilt_x);
    }
  }
  throw invalid_argument_error("unknown geometry kind");
}

EmitterArray driven_subarray(const EmitterArray& array) {
  if (array.driven.empty()) return array;
  EmitterArray sub;
  sub.gamma0 = array.gamma0;
  sub.lambda0 = array.lambda0;
  for (int j : array.driven) {
    sub.positions.push_back(array.positions[j]);
    sub.orientations.push_back(array.orientations[j]);
  }
  return sub;
}

// The laser addresses a collective mode of the emitters it actually drives,
// so mode targeting is resolved on the driven sub-array.
double resolve_detuning(const DriveConfig& dc, const EmitterArray& array) {
  if (dc.rule == DetuningRule::fixed) return dc.detuning;
  const CouplingMatrices cm = coupling_matrices(driven_subarray(array));
  const ModeSelection sel = dc.rule == DetuningRule::superradiant
                                ? ModeSelection::most_superradiant
                                : ModeSelection::most_subradiant;
  return target_detuning(cm, sel);
}

Drive assemble_drive(const DriveConfig& dc, const EmitterArray& array) {
  Drive drv;
  drv.rabi = dc.rabi;
  drv.detuning = resolve_detuning(dc, array);
  const double kn = dc.k_dir.norm();
  if (kn < 1e-12)
    throw invalid_argument_error("drive propagation direction must be nonzero");
  drv.k_vec = dc.k_dir * (array.k0() / kn);
  const double pn = std::sqrt(dc.polarization.squared_norm());
  if (pn < 1e-12)
    throw invalid_argument_error("drive polarization must be nonzero");
  drv.polarization = dc.polarization * cplx(1.0 / pn, 0.0);
  drv.pulse = dc.pulse;
  validate_drive(drv);
  return drv;
}

DetectorParams detector_params(const DetectorConfig& det) {
  DetectorParams p;
  p.delta_phi = det.delta_phi;
  p.r_far = det.r_far;
  p.n_quad = det.n_quad;
  p.filtered = det.filtered;
  p.filter_axis = det.filter_axis;
  return p;
}

std::vector<double> make_phi_grid(int n_phi) {
  if (n_phi < 8) throw invalid_argument_error("angular grid needs at least 8 points");
  std::vector<double> grid(n_phi);
  for (int i = 0; i < n_phi; ++i)
    grid[i] = -M_PI + 2.0 * M_PI * i / n_phi;
  return grid;
}

SteadyStateOptions solver_options(const SolverConfig& sc, int dim) {
  SteadyStateOptions o;
  if (sc.method == "auto") {
    // The dense factorization costs O(D⁶); its break-even against the
    // preconditioned iteration sits near D ≈ 40 on one core, well below the
    // hard dense-path budget.
    o.method = dim <= 40 ? SteadyStateMethod::null_space
                         : SteadyStateMethod::krylov;
  } else {
    o.method = steady_state_method_from_string(sc.method);
  }
  o.tol = sc.tol;
  o.max_time = sc.max_time;
  return o;
}

// One steady state plus its angular scan; the shared core of the steady
// presets, the sweeps, and every disorder realization.
struct SteadyPoint {
  SteadyStateReport report;
  AngularScan scan;
  double detuning = 0.0;
  double gamma_out = 0.0;
  double n_ex = 0.0;
  std::vector<double> manifolds;

  double phi_max() const { return scan.argmax >= 0 ? scan.points[scan.argmax].phi : kNaN; }
  double g2_at_max() const { return scan.argmax >= 0 ? scan.points[scan.argmax].g2 : kNaN; }
};

SteadyPoint run_steady_point(const EmitterArray& array, const DriveConfig& dc,
                             int n_max, const DetectorConfig& det,
                             const SolverConfig& sol, int threads) {
  const CouplingMatrices cm = coupling_matrices(array);
  const Drive drv = assemble_drive(dc, array);
  Basis basis = build_basis(array.size(), n_max, kBasisBudget);
  const MasterEquation eq(array, cm, std::move(basis), drv);
  SteadyPoint point;
  point.detuning = drv.detuning;
  point.report = steady_state(eq, solver_options(sol, eq.dim()));
  point.gamma_out = total_emission_rate(point.report.state, cm);
  point.n_ex = excited_population(point.report.state);
  point.manifolds = manifold_populations(point.report.state);
  point.scan = angular_scan(point.report.state, array, make_phi_grid(det.n_phi),
                            detector_params(det), threads);
  return point;
}

void note_scan_failures(const AngularScan& scan, std::vector<std::string>& notes) {
  int reported = 0;
  for (const AngularPoint& p : scan.points) {
    if (p.ok) continue;
    if (++reported > 8) {
      notes.push_back("further scan-point failures suppressed");
      break;
    }
    notes.push_back("scan point phi=" + std::to_string(p.phi) + " failed: " + p.error);
  }
}

void push_manifolds(std::vector<std::pair<std::string, double>>& summary,
                    const std::vector<double>& manifolds) {
  for (std::size_t n = 0; n < manifolds.size(); ++n)
    summary.emplace_back("p" + std::to_string(n), manifolds[n]);
}

void apply_sweep_value(ScenarioConfig& cfg, const std::string& variable, double value) {
  if (variable == "rabi") {
    cfg.drive.rabi = value;
  } else if (variable == "detuning") {
    cfg.drive.rule = DetuningRule::fixed;
    cfg.drive.detuning = value;
  } else if (variable == "n") {
    cfg.geometry.n = static_cast<int>(std::llround(value));
    if (cfg.geometry.kind == GeometryKind::ring_pair && cfg.geometry.n_second > 0)
      cfg.geometry.n_second = cfg.geometry.n;
  } else if (variable == "n_second") {
    cfg.geometry.n_second = static_cast<int>(std::llround(value));
  } else if (variable == "spacing") {
    cfg.geometry.spacing = value;
  } else {
    throw invalid_argument_error("unknown sweep variable: " + variable);
  }
}

std::vector<std::string> manifold_columns(int n_max, const std::string& suffix = "") {
  std::vector<std::string> cols;
  for (int n = 0; n <= n_max; ++n) cols.push_back("p" + std::to_string(n) + suffix);
  return cols;
}

// chain_steady / ring_pair / tilted_polarization: steady state, angular scan,
// optionally repeated over a sweep variable. The presets differ only in their
// default geometry and drive.
ScenarioResult run_steady_scan(const ScenarioConfig& cfg) {
  ScenarioResult result;

  if (cfg.sweep) {
    Table sweep;
    sweep.name = "sweep";
    sweep.columns = {cfg.sweep->variable, "detuning",  "gamma_out",
                     "n_ex",              "j_max",     "phi_max",
                     "g2_at_max",         "j_max_over_gamma_out"};
    const auto pcols = manifold_columns(cfg.n_max);
    sweep.columns.insert(sweep.columns.end(), pcols.begin(), pcols.end());

    for (double value : cfg.sweep->values) {
      ScenarioConfig local = cfg;
      local.sweep.reset();
      apply_sweep_value(local, cfg.sweep->variable, value);
      const EmitterArray array = build_geometry(local.geometry);
      const SteadyPoint point = run_steady_point(array, local.drive, local.n_max,
                                                 local.detector, local.solver,
                                                 local.threads);
      std::vector<double> row = {value,
                                 point.detuning,
                                 point.gamma_out,
                                 point.n_ex,
                                 point.scan.j_max,
                                 point.phi_max(),
                                 point.g2_at_max(),
                                 point.scan.j_max / point.gamma_out};
      row.insert(row.end(), point.manifolds.begin(), point.manifolds.end());
      sweep.rows.push_back(std::move(row));
      note_scan_failures(point.scan, result.notes);
    }
    result.tables.push_back(std::move(sweep));
    return result;
  }

  const EmitterArray array = build_geometry(cfg.geometry);
  const SteadyPoint point = run_steady_point(array, cfg.drive, cfg.n_max,
                                             cfg.detector, cfg.solver, cfg.threads);

  Table scan;
  scan.name = "angular_scan";
  scan.columns = {"phi", "j_norm", "g2"};
  const double j_ref = point.scan.j_max > 0.0 ? point.scan.j_max : 1.0;
  for (const AngularPoint& p : point.scan.points) {
    if (p.ok)
      scan.rows.push_back({p.phi, p.j_phi / j_ref, p.g2});
    else
      scan.rows.push_back({p.phi, kNaN, kNaN});
  }
  result.tables.push_back(std::move(scan));
  note_scan_failures(point.scan, result.notes);

  result.summary = {{"n", static_cast<double>(array.size())},
                    {"dim", static_cast<double>(point.report.state.dim())},
                    {"rabi", cfg.drive.rabi},
                    {"detuning", point.detuning},
                    {"gamma_out", point.gamma_out},
                    {"n_ex", point.n_ex},
                    {"j_max", point.scan.j_max},
                    {"phi_max", point.phi_max()},
                    {"g2_at_max", point.g2_at_max()},
                    {"residual", point.report.residual},
                    {"iterations", static_cast<double>(point.report.iterations)}};
  push_manifolds(result.summary, point.manifolds);
  result.notes.push_back("steady_state_method=" + to_string(point.report.method));
  return result;
}

// chain_statistics: manifold populations under superradiant and subradiant
// targeting, side by side (optionally across a sweep).
ScenarioResult run_chain_statistics(const ScenarioConfig& cfg) {
  ScenarioResult result;
  Table table;
  table.name = "manifold_populations";
  table.columns = {"target", "rabi", "spacing"};
  const auto pcols = manifold_columns(cfg.n_max);
  table.columns.insert(table.columns.end(), pcols.begin(), pcols.end());
  table.columns.push_back("n_ex");
  table.columns.push_back("gamma_out");

  const std::vector<double> sweep_values =
      cfg.sweep ? cfg.sweep->values : std::vector<double>{kNaN};

  for (double value : sweep_values) {
    ScenarioConfig local = cfg;
    local.sweep.reset();
    if (cfg.sweep) apply_sweep_value(local, cfg.sweep->variable, value);
    const EmitterArray array = build_geometry(local.geometry);
    for (int target = 0; target < 2; ++target) {
      DriveConfig dc = local.drive;
      dc.rule = target == 0 ? DetuningRule::superradiant : DetuningRule::subradiant;
      const SteadyPoint point = run_steady_point(array, dc, local.n_max,
                                                 local.detector, local.solver,
                                                 local.threads);
      std::vector<double> row = {static_cast<double>(target), dc.rabi,
                                 local.geometry.spacing};
      row.insert(row.end(), point.manifolds.begin(), point.manifolds.end());
      row.push_back(point.n_ex);
      row.push_back(point.gamma_out);
      table.rows.push_back(std::move(row));
    }
  }
  result.tables.push_back(std::move(table));
  result.notes.push_back("target column: 0 = superradiant, 1 = subradiant");
  return result;
}

// pulse_subradiant: Gaussian-pulse excitation followed by free decay; time
// series of envelope, population, emission rate and manifold populations.
ScenarioResult run_pulse(const ScenarioConfig& cfg) {
  if (!cfg.drive.pulse)
    throw invalid_argument_error("pulse preset requires a pulse block in the drive");
  const EmitterArray array = build_geometry(cfg.geometry);
  const CouplingMatrices cm = coupling_matrices(array);
  const Drive drv = assemble_drive(cfg.drive, array);
  Basis basis = build_basis(array.size(), cfg.n_max, kBasisBudget);
  const MasterEquation eq(array, cm, std::move(basis), drv);

  if (cfg.time.n_samples < 2 || cfg.time.t_final <= 0.0)
    throw invalid_argument_error("pulse preset needs t_final > 0 and at least two samples");
  IntegratorOptions opts;
  opts.sample_times.resize(cfg.time.n_samples);
  for (int i = 0; i < cfg.time.n_samples; ++i)
    opts.sample_times[i] = cfg.time.t_final * i / (cfg.time.n_samples - 1);

  const Trajectory traj = evolve(eq, ground_state(eq.basis()), 0.0,
                                 cfg.time.t_final, opts);

  ScenarioResult result;
  Table series;
  series.name = "time_series";
  series.columns = {"t", "envelope", "n_ex", "gamma_out"};
  const auto pcols = manifold_columns(cfg.n_max);
  series.columns.insert(series.columns.end(), pcols.begin(), pcols.end());

  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    DensityState state{traj.states[i], eq.basis(), traj.times[i]};
    std::vector<double> row = {traj.times[i], drv.envelope(traj.times[i]),
                               excited_population(state),
                               total_emission_rate(state, cm)};
    const auto manifolds = manifold_populations(state);
    row.insert(row.end(), manifolds.begin(), manifolds.end());
    series.rows.push_back(std::move(row));
  }
  result.tables.push_back(std::move(series));

  const DensityState final_state{traj.states.back(), eq.basis(), traj.times.back()};
  const auto manifolds = manifold_populations(final_state);
  result.summary = {{"n", static_cast<double>(array.size())},
                    {"detuning", drv.detuning},
                    {"t_final", traj.times.back()},
                    {"n_ex_final", excited_population(final_state)},
                    {"gamma_out_final", total_emission_rate(final_state, cm)},
                    {"steps_accepted", static_cast<double>(traj.stats.steps_accepted)},
                    {"steps_rejected", static_cast<double>(traj.stats.steps_rejected)}};
  push_manifolds(result.summary, manifolds);
  if (manifolds.size() >= 2)
    result.summary.emplace_back("p0_plus_p1", manifolds[0] + manifolds[1]);
  return result;
}

std::uint64_t cell_seed(std::uint64_t base, int n, double epsilon) {
  const std::uint64_t a = Rng::derive_seed(base, static_cast<std::uint64_t>(n));
  return Rng::derive_seed(a, static_cast<std::uint64_t>(std::llround(epsilon * 1e9)));
}

// disorder_sweep: ordered baseline plus Monte Carlo cells over (n, ε).
ScenarioResult run_disorder_sweep(const ScenarioConfig& cfg) {
  if (!cfg.disorder)
    throw invalid_argument_error("disorder preset requires a disorder block");

  const std::vector<double> n_values =
      cfg.sweep ? cfg.sweep->values
                : std::vector<double>{static_cast<double>(cfg.geometry.n)};
  if (cfg.sweep && cfg.sweep->variable != "n")
    throw invalid_argument_error("disorder_sweep only sweeps over \"n\"");

  ScenarioResult result;
  Table stats;
  stats.name = "disorder";
  stats.columns = {"n",      "epsilon",        "ordered_gamma_out", "ordered_g2",
                   "mean_gamma_out", "std_gamma_out", "mean_g2",   "std_g2",
                   "n_ok",   "n_failed"};
  Table records;
  records.name = "realizations";
  records.columns = {"n",   "epsilon", "realization", "gamma_out",
                     "g2",  "phi_max", "j_max",       "ok"};

  for (double n_value : n_values) {
    ScenarioConfig local = cfg;
    local.sweep.reset();
    local.geometry.n = static_cast<int>(std::llround(n_value));

    // Ordered baseline; its detuning is frozen into every realization.
    const EmitterArray ordered = build_geometry(local.geometry);
    const double frozen = resolve_detuning(local.drive, ordered);
    DriveConfig frozen_drive = local.drive;
    frozen_drive.rule = DetuningRule::fixed;
    frozen_drive.detuning = frozen;
    local.drive = frozen_drive;
    const SteadyPoint base = run_steady_point(ordered, frozen_drive, local.n_max,
                                              local.detector, local.solver,
                                              local.threads);

    for (double epsilon : cfg.disorder->epsilons) {
      const DisorderStats cell = disorder_average(local, epsilon);
      stats.rows.push_back({n_value, epsilon, base.gamma_out, base.g2_at_max(),
                            cell.mean_gamma_out, cell.std_gamma_out, cell.mean_g2,
                            cell.std_g2, static_cast<double>(cell.n_ok),
                            static_cast<double>(cell.n_failed)});
      for (std::size_t r = 0; r < cell.realizations.size(); ++r) {
        const RealizationRecord& rec = cell.realizations[r];
        records.rows.push_back({n_value, epsilon, static_cast<double>(r),
                                rec.ok ? rec.gamma_out : kNaN,
                                rec.ok ? rec.g2 : kNaN,
                                rec.ok ? rec.phi_max : kNaN,
                                rec.ok ? rec.j_max : kNaN,
                                rec.ok ? 1.0 : 0.0});
        if (!rec.ok)
          result.notes.push_back("n=" + std::to_string(local.geometry.n) +
                                 " eps=" + std::to_string(epsilon) + " realization " +
                                 std::to_string(r) + " failed: " + rec.error);
      }
    }
  }
  result.tables.push_back(std::move(stats));
  result.tables.push_back(std::move(records));
  return result;
}

ScenarioResult run_model_comparison(const ScenarioConfig& cfg) {
  const std::vector<double> rabi_values =
      cfg.sweep ? cfg.sweep->values : std::vector<double>{cfg.drive.rabi};
  if (cfg.sweep && cfg.sweep->variable != "rabi")
    throw invalid_argument_error("model_comparison only sweeps over \"rabi\"");

  const int n = cfg.geometry.n;
  const auto recs = model_comparison(n, cfg.geometry.spacing, cfg.drive,
                                     rabi_values, cfg.solver);

  ScenarioResult result;
  Table table;
  table.name = "model_comparison";
  table.columns = {"rabi",
                   "n_ex_truncated",      "n_ex_full",      "n_ex_rel_dev",
                   "gamma_out_truncated", "gamma_out_full", "gamma_out_rel_dev"};
  const auto tcols = manifold_columns(2, "_truncated");
  const auto fcols = manifold_columns(n, "_full");
  table.columns.insert(table.columns.end(), tcols.begin(), tcols.end());
  table.columns.insert(table.columns.end(), fcols.begin(), fcols.end());

  for (const ModelComparisonRecord& rec : recs) {
    std::vector<double> row = {rec.rabi,
                               rec.n_ex_truncated,      rec.n_ex_full,
                               rec.n_ex_rel_dev,        rec.gamma_out_truncated,
                               rec.gamma_out_full,      rec.gamma_out_rel_dev};
    row.insert(row.end(), rec.manifolds_truncated.begin(), rec.manifolds_truncated.end());
    row.insert(row.end(), rec.manifolds_full.begin(), rec.manifolds_full.end());
    table.rows.push_back(std::move(row));
  }
  result.tables.push_back(std::move(table));
  return result;
}

// dispersion: the infinite-chain band on a k grid plus the finite chain's
// modes placed by spin-wave overlap.
ScenarioResult run_dispersion(const ScenarioConfig& cfg) {
  if (cfg.geometry.kind != GeometryKind::chain)
    throw invalid_argument_error("dispersion preset requires a chain geometry");
  const double d = cfg.geometry.spacing;
  const double k0 = 2.0 * M_PI;  // λ₀ units
  const int n_k = cfg.dispersion_k_points;
  if (n_k < 2) throw invalid_argument_error("dispersion needs at least two k points");

  ScenarioResult result;
  Table band;
  band.name = "band";
  band.columns = {"k", "kd_over_pi", "shift", "decay", "inside_light_line"};
  for (int i = 0; i < n_k; ++i) {
    const double k = (M_PI / d) * i / (n_k - 1);
    double shift = kNaN, decay = kNaN;
    try {
      const cplx w = chain_dispersion(k, d, cfg.geometry.orientation);
      shift = w.real();
      decay = -2.0 * w.imag();
    } catch (const convergence_failure_error& e) {
      result.notes.push_back("band point k=" + std::to_string(k) + " skipped: " + e.what());
    }
    band.rows.push_back({k, k * d / M_PI, shift, decay, k < k0 ? 1.0 : 0.0});
  }
  result.tables.push_back(std::move(band));

  const EmitterArray array = build_geometry(cfg.geometry);
  const CouplingMatrices cm = coupling_matrices(array);
  Table modes;
  modes.name = "modes";
  modes.columns = {"k", "kd_over_pi", "overlap", "shift", "decay", "inside_light_line"};
  for (const CollectiveMode& mode : effective_modes(cm)) {
    const QuasiMomentum qm = assign_quasi_momentum(mode.vector, d);
    modes.rows.push_back({qm.k, qm.k * d / M_PI, qm.overlap, mode.shift, mode.decay,
                          qm.k < k0 ? 1.0 : 0.0});
  }
  result.tables.push_back(std::move(modes));

  result.summary = {{"n", static_cast<double>(cfg.geometry.n)},
                    {"spacing", d},
                    {"k_light_line", k0}};
  return result;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> preset_catalog() {
  return {
      {"chain_steady", "driven chain steady state: angular emission and photon statistics"},
      {"chain_statistics", "excitation-manifold populations under super/subradiant targeting"},
      {"pulse_subradiant", "Gaussian-pulse preparation of a long-lived chain excitation"},
      {"ring_pair", "driven ring with a tilted passive ring: directional scattering"},
      {"tilted_polarization", "ring pair driven through a small dipole tilt by circular light"},
      {"disorder_sweep", "Monte Carlo positional disorder: emission rate and g2 trends"},
      {"model_comparison", "two-excitation truncation vs the full model on a small chain"},
      {"dispersion", "infinite-chain band structure with finite-chain mode overlay"},
  };
}

ScenarioConfig preset_config(const std::string& preset) {
  ScenarioConfig cfg;
  cfg.preset = preset;
  if (preset == "chain_steady") {
    cfg.geometry.n = 30;
    cfg.geometry.spacing = 1.0 / 40.0;
    cfg.drive.rabi = 2.0;
  } else if (preset == "chain_statistics") {
    cfg.geometry.n = 9;
    cfg.geometry.spacing = 0.05;
    cfg.n_max = 4;
    cfg.drive.rabi = 2.0;
  } else if (preset == "pulse_subradiant") {
    cfg.geometry.n = 12;
    cfg.geometry.spacing = 1.0 / 20.0;
    cfg.drive.rule = DetuningRule::subradiant;
    cfg.drive.pulse = Pulse{2.0, 50.0, 25.0};
    cfg.time = {150.0, 151};
  } else if (preset == "ring_pair") {
    cfg.geometry.kind = GeometryKind::ring_pair;
    cfg.geometry.n = 4;
    cfg.geometry.n_second = 4;
    cfg.geometry.spacing = 0.02;
    cfg.drive.rabi = 2.0;
  } else if (preset == "tilted_polarization") {
    cfg.geometry.kind = GeometryKind::ring_pair;
    cfg.geometry.n = 14;
    cfg.geometry.n_second = 14;
    cfg.geometry.spacing = 0.02;
    cfg.geometry.orientation_tilt_x = 0.1;
    cfg.drive.rabi = 40.0;
    cfg.drive.k_dir = Vec3(0.0, 0.0, 1.0);
    cfg.drive.polarization = CVec3(cplx(M_SQRT1_2, 0.0), cplx(0.0, M_SQRT1_2), 0.0);
  } else if (preset == "disorder_sweep") {
    cfg.geometry.n = 10;
    cfg.geometry.spacing = 1.0 / 40.0;
    cfg.drive.rabi = 2.0;
    cfg.sweep = SweepConfig{"n", {5.0, 10.0, 15.0}};
    cfg.disorder = DisorderConfig{{0.02, 0.1}, 100, 1};
  } else if (preset == "model_comparison") {
    cfg.geometry.n = 5;
    cfg.geometry.spacing = 0.05;
    cfg.sweep = SweepConfig{"rabi", {0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0}};
  } else if (preset == "dispersion") {
    cfg.geometry.n = 50;
    cfg.geometry.spacing = 0.05;
  } else {
    throw invalid_argument_error("unknown preset: " + preset);
  }
  return cfg;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  const std::string& p = config.preset;
  if (p == "chain_steady" || p == "ring_pair" || p == "tilted_polarization")
    return run_steady_scan(config);
  if (p == "chain_statistics") return run_chain_statistics(config);
  if (p == "pulse_subradiant") return run_pulse(config);
  if (p == "disorder_sweep") return run_disorder_sweep(config);
  if (p == "model_comparison") return run_model_comparison(config);
  if (p == "dispersion") return run_dispersion(config);
  throw invalid_argument_error("unknown preset: " + p);
}

namespace {

// Pairwise summation: deterministic and accurate regardless of how the
// realizations were scheduled.
double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 4) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

std::pair<double, double> mean_and_std(const std::vector<double>& v) {
  if (v.empty()) return {kNaN, kNaN};
  const double mean = pairwise_sum(v, 0, v.size()) / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
  const double var = pairwise_sum(sq, 0, sq.size()) / static_cast<double>(v.size() - 1);
  return {mean, std::sqrt(var)};
}

}  // namespace

DisorderStats disorder_average(const ScenarioConfig& config, double epsilon) {
  if (!config.disorder)
    throw invalid_argument_error("disorder_average requires a disorder block");
  if (epsilon < 0.0) throw invalid_argument_error("disorder fraction must be >= 0");
  const int n_real = config.disorder->n_realizations;
  if (n_real < 1) throw invalid_argument_error("need at least one disorder realization");

  const EmitterArray ordered = build_geometry(config.geometry);
  DriveConfig frozen_drive = config.drive;
  frozen_drive.detuning = resolve_detuning(config.drive, ordered);
  frozen_drive.rule = DetuningRule::fixed;

  const std::uint64_t cell = cell_seed(config.disorder->seed, ordered.size(), epsilon);
  DisorderStats stats;
  stats.epsilon = epsilon;
  stats.realizations.resize(n_real);

  // Realizations run in parallel; the inner angular scans stay sequential so
  // the machine is not oversubscribed.
  parallel_for(static_cast<std::size_t>(n_real), [&](std::size_t r) {
    RealizationRecord& rec = stats.realizations[r];
    rec.seed = Rng::derive_seed(cell, r);
    try {
      const EmitterArray sample =
          apply_disorder(ordered, epsilon, config.geometry.spacing, rec.seed);
      const SteadyPoint point = run_steady_point(sample, frozen_drive, config.n_max,
                                                 config.detector, config.solver, 1);
      if (point.scan.argmax < 0)
        throw convergence_failure_error("angular scan produced no valid point");
      rec.gamma_out = point.gamma_out;
      rec.g2 = point.g2_at_max();
      rec.phi_max = point.phi_max();
      rec.j_max = point.scan.j_max;
      rec.ok = true;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
  }, config.threads);

  std::vector<double> gamma, g2;
  for (const RealizationRecord& rec : stats.realizations) {
    if (!rec.ok) continue;
    gamma.push_back(rec.gamma_out);
    g2.push_back(rec.g2);
  }
  stats.n_ok = static_cast<int>(gamma.size());
  stats.n_failed = n_real - stats.n_ok;
  if (stats.n_failed * 10 > n_real)
    throw convergence_failure_error(
        "more than 10% of disorder realizations failed (" +
        std::to_string(stats.n_failed) + " of " + std::to_string(n_real) + ")");

  std::tie(stats.mean_gamma_out, stats.std_gamma_out) = mean_and_std(gamma);
  std::tie(stats.mean_g2, stats.std_g2) = mean_and_std(g2);
  return stats;
}

std::vector<ModelComparisonRecord> model_comparison(int n, double d,
                                                    const DriveConfig& drive,
                                                    const std::vector<double>& rabi_values,
                                                    const SolverConfig& solver) {
  if (n > 6)
    throw resource_limit_error("model_comparison is bounded to n <= 6 (full model cost)");
  const EmitterArray array = make_chain(n, d, Vec3(0, 1, 0), Vec3(0, 0, 1));
  const CouplingMatrices cm = coupling_matrices(array);

  DriveConfig base = drive;
  base.detuning = resolve_detuning(drive, array);
  base.rule = DetuningRule::fixed;

  std::vector<ModelComparisonRecord> records;
  for (double rabi : rabi_values) {
    DriveConfig dc = base;
    dc.rabi = rabi;
    ModelComparisonRecord rec;
    rec.rabi = rabi;
    for (int full = 0; full < 2; ++full) {
      const int n_max = full ? n : 2;
      Basis basis = build_basis(n, n_max, kBasisBudget);
      const MasterEquation eq(array, cm, std::move(basis),
                              assemble_drive(dc, array));
      const SteadyStateReport report = steady_state(eq, solver_options(solver, eq.dim()));
      const double n_ex = excited_population(report.state);
      const double gamma_out = total_emission_rate(report.state, cm);
      const auto manifolds = manifold_populations(report.state);
      if (full) {
        rec.n_ex_full = n_ex;
        rec.gamma_out_full = gamma_out;
        rec.manifolds_full = manifolds;
      } else {
        rec.n_ex_truncated = n_ex;
        rec.gamma_out_truncated = gamma_out;
        rec.manifolds_truncated = manifolds;
      }
    }
    const auto rel = [](double a, double b) {
      const double scale = std::max(std::abs(b), 1e-300);
      return std::abs(a - b) / scale;
    };
    rec.n_ex_rel_dev = rel(rec.n_ex_truncated, rec.n_ex_full);
    rec.gamma_out_rel_dev = rel(rec.gamma_out_truncated, rec.gamma_out_full);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace dipolesim
