#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "dipolesim/errors.hpp"
#include "dipolesim/scenarios.hpp"

using namespace dipolesim;

namespace {

// All scenario runs in this suite use deliberately tiny systems; the point is
// the plumbing (tables, sweeps, seeds, validation), not the physics, which the
// lower-level suites already cover.

int column_index(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return static_cast<int>(i);
  return -1;
}

double cell(const Table& t, std::size_t row, const std::string& name) {
  const int c = column_index(t, name);
  REQUIRE(c >= 0);
  REQUIRE(row < t.rows.size());
  return t.rows[row][static_cast<std::size_t>(c)];
}

const Table& table_named(const ScenarioResult& r, const std::string& name) {
  for (const Table& t : r.tables)
    if (t.name == name) return t;
  FAIL("missing table: " << name);
  return r.tables.front();
}

double summary_value(const ScenarioResult& r, const std::string& key) {
  for (const auto& [k, v] : r.summary)
    if (k == key) return v;
  FAIL("missing summary key: " << key);
  return 0.0;
}

bool has_note_containing(const ScenarioResult& r, const std::string& needle) {
  for (const std::string& note : r.notes)
    if (note.find(needle) != std::string::npos) return true;
  return false;
}

// Small steady-scan configuration used by the determinism and sweep cases.
ScenarioConfig tiny_chain_steady() {
  ScenarioConfig cfg = preset_config("chain_steady");
  cfg.geometry.n = 3;
  cfg.geometry.spacing = 0.08;
  cfg.detector.n_phi = 24;
  cfg.threads = 1;
  return cfg;
}

bool tables_identical(const Table& a, const Table& b) {
  if (a.name != b.name || a.columns != b.columns || a.rows.size() != b.rows.size())
    return false;
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    if (a.rows[r].size() != b.rows[r].size()) return false;
    for (std::size_t c = 0; c < a.rows[r].size(); ++c) {
      const double x = a.rows[r][c], y = b.rows[r][c];
      if (std::isnan(x) != std::isnan(y)) return false;
      if (!std::isnan(x) && x != y) return false;
    }
  }
  return true;
}

bool results_identical(const ScenarioResult& a, const ScenarioResult& b) {
  if (a.tables.size() != b.tables.size()) return false;
  for (std::size_t i = 0; i < a.tables.size(); ++i)
    if (!tables_identical(a.tables[i], b.tables[i])) return false;
  if (a.summary.size() != b.summary.size()) return false;
  for (std::size_t i = 0; i < a.summary.size(); ++i) {
    if (a.summary[i].first != b.summary[i].first) return false;
    const double x = a.summary[i].second, y = b.summary[i].second;
    if (std::isnan(x) != std::isnan(y)) return false;
    if (!std::isnan(x) && x != y) return false;
  }
  return a.notes == b.notes;
}

}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("preset catalog and configurations agree") {
  const auto catalog = preset_catalog();
  REQUIRE(catalog.size() == 8);
  const std::vector<std::string> expected = {
      "chain_steady",     "chain_statistics", "pulse_subradiant",
      "ring_pair",        "tilted_polarization", "disorder_sweep",
      "model_comparison", "dispersion"};
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    CHECK(catalog[i].first == expected[i]);
    CHECK(!catalog[i].second.empty());
    // Every cataloged name must yield a configuration tagged with itself.
    const ScenarioConfig cfg = preset_config(catalog[i].first);
    CHECK(cfg.preset == catalog[i].first);
  }
  CHECK_THROWS_AS(preset_config("rings_of_power"), invalid_argument_error);
  ScenarioConfig bogus;
  bogus.preset = "rings_of_power";
  CHECK_THROWS_AS(run_scenario(bogus), invalid_argument_error);
}

TEST_CASE("preset defaults carry the shipped parameters") {
  const ScenarioConfig chain = preset_config("chain_steady");
  CHECK(chain.geometry.n == 30);
  CHECK(chain.geometry.spacing == 1.0 / 40.0);
  CHECK(chain.drive.rabi == 2.0);
  CHECK(chain.n_max == 2);

  const ScenarioConfig stats = preset_config("chain_statistics");
  CHECK(stats.geometry.n == 9);
  CHECK(stats.n_max == 4);

  const ScenarioConfig pulse = preset_config("pulse_subradiant");
  REQUIRE(pulse.drive.pulse.has_value());
  CHECK(pulse.drive.pulse->amplitude == 2.0);
  CHECK(pulse.drive.pulse->center == 50.0);
  CHECK(pulse.drive.pulse->width == 25.0);
  CHECK(pulse.drive.rule == DetuningRule::subradiant);
  CHECK(pulse.time.t_final == 150.0);

  const ScenarioConfig tilted = preset_config("tilted_polarization");
  CHECK(tilted.geometry.kind == GeometryKind::ring_pair);
  CHECK(tilted.geometry.n == 14);
  CHECK(tilted.geometry.orientation_tilt_x == 0.1);
  CHECK(tilted.drive.rabi == 40.0);
  CHECK(tilted.drive.k_dir.z == 1.0);
  CHECK(std::abs(tilted.drive.polarization.x) == doctest::Approx(M_SQRT1_2));
  CHECK(std::abs(tilted.drive.polarization.y.imag()) == doctest::Approx(M_SQRT1_2));

  const ScenarioConfig dis = preset_config("disorder_sweep");
  REQUIRE(dis.sweep.has_value());
  CHECK(dis.sweep->variable == "n");
  CHECK(dis.sweep->values == std::vector<double>{5.0, 10.0, 15.0});
  REQUIRE(dis.disorder.has_value());
  CHECK(dis.disorder->epsilons == std::vector<double>{0.02, 0.1});
  CHECK(dis.disorder->n_realizations == 100);

  const ScenarioConfig cmp = preset_config("model_comparison");
  REQUIRE(cmp.sweep.has_value());
  CHECK(cmp.sweep->variable == "rabi");
  CHECK(cmp.sweep->values.size() == 7);
}

TEST_CASE("steady scan emits the angular table and a full summary") {
  const ScenarioConfig cfg = tiny_chain_steady();
  const ScenarioResult res = run_scenario(cfg);

  REQUIRE(res.tables.size() == 1);
  const Table& scan = table_named(res, "angular_scan");
  REQUIRE(scan.columns == std::vector<std::string>{"phi", "j_norm", "g2"});
  REQUIRE(scan.rows.size() == 24);
  // Uniform grid over [-pi, pi), and the normalized intensity peaks at one.
  CHECK(scan.rows[0][0] == doctest::Approx(-M_PI).epsilon(1e-14));
  CHECK(scan.rows[1][0] - scan.rows[0][0] == doctest::Approx(2.0 * M_PI / 24).epsilon(1e-13));
  double j_peak = 0.0;
  for (const auto& row : scan.rows) j_peak = std::max(j_peak, row[1]);
  CHECK(j_peak == doctest::Approx(1.0).epsilon(1e-14));

  CHECK(summary_value(res, "n") == 3.0);
  CHECK(summary_value(res, "dim") == 7.0);
  CHECK(summary_value(res, "rabi") == 2.0);
  CHECK(summary_value(res, "n_ex") > 0.0);
  CHECK(summary_value(res, "gamma_out") > 0.0);
  CHECK(summary_value(res, "j_max") > 0.0);
  CHECK(summary_value(res, "p0") + summary_value(res, "p1") + summary_value(res, "p2") ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(has_note_containing(res, "steady_state_method="));

  // No randomness anywhere in this path: a second run must be bit-identical.
  CHECK(results_identical(res, run_scenario(cfg)));
}

TEST_CASE("steady sweep repeats the scan over the swept knob") {
  ScenarioConfig cfg = tiny_chain_steady();
  cfg.geometry.n = 2;
  cfg.detector.n_phi = 16;
  cfg.sweep = SweepConfig{"rabi", {0.5, 1.5}};
  const ScenarioResult res = run_scenario(cfg);

  REQUIRE(res.tables.size() == 1);
  const Table& sweep = table_named(res, "sweep");
  CHECK(sweep.columns[0] == "rabi");
  // 8 fixed columns plus p0..p2 for the two-excitation basis.
  CHECK(sweep.columns.size() == 11);
  REQUIRE(sweep.rows.size() == 2);
  CHECK(cell(sweep, 0, "rabi") == 0.5);
  CHECK(cell(sweep, 1, "rabi") == 1.5);
  // Stronger drive pushes more light out of the array.
  CHECK(cell(sweep, 1, "gamma_out") > cell(sweep, 0, "gamma_out"));
  CHECK(cell(sweep, 1, "n_ex") > cell(sweep, 0, "n_ex"));
  for (std::size_t r = 0; r < 2; ++r) {
    CHECK(cell(sweep, r, "j_max") > 0.0);
    CHECK(cell(sweep, r, "j_max_over_gamma_out") ==
          doctest::Approx(cell(sweep, r, "j_max") / cell(sweep, r, "gamma_out")));
  }

  cfg.sweep = SweepConfig{"flux_capacitance", {1.0}};
  CHECK_THROWS_AS(run_scenario(cfg), invalid_argument_error);
}

TEST_CASE("detector grid must resolve the circle") {
  ScenarioConfig cfg = tiny_chain_steady();
  cfg.detector.n_phi = 7;
  CHECK_THROWS_AS(run_scenario(cfg), invalid_argument_error);
}

TEST_CASE("chain statistics pairs both detuning targets per sweep value") {
  ScenarioConfig cfg = preset_config("chain_statistics");
  cfg.geometry.n = 3;
  cfg.geometry.spacing = 0.06;
  cfg.n_max = 2;
  cfg.threads = 1;
  cfg.sweep = SweepConfig{"rabi", {0.4, 1.2}};
  const ScenarioResult res = run_scenario(cfg);

  const Table& t = table_named(res, "manifold_populations");
  REQUIRE(t.columns == std::vector<std::string>{"target", "rabi", "spacing", "p0",
                                                "p1", "p2", "n_ex", "gamma_out"});
  REQUIRE(t.rows.size() == 4);
  for (std::size_t r = 0; r < 4; ++r) {
    CHECK(cell(t, r, "target") == (r % 2 == 0 ? 0.0 : 1.0));
    CHECK(cell(t, r, "rabi") == (r < 2 ? 0.4 : 1.2));
    CHECK(cell(t, r, "spacing") == 0.06);
    CHECK(cell(t, r, "p0") + cell(t, r, "p1") + cell(t, r, "p2") ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
  // Superradiant targeting drains energy faster than subradiant targeting at
  // equal drive; the emission column must reflect that on each pair of rows.
  CHECK(cell(t, 0, "gamma_out") > cell(t, 1, "gamma_out"));
  CHECK(cell(t, 2, "gamma_out") > cell(t, 3, "gamma_out"));
  CHECK(has_note_containing(res, "0 = superradiant"));
}

TEST_CASE("pulse preset integrates the drive envelope it reports") {
  ScenarioConfig cfg = preset_config("pulse_subradiant");
  cfg.geometry.n = 3;
  cfg.geometry.spacing = 0.05;
  cfg.drive.pulse = Pulse{1.0, 5.0, 2.0};
  cfg.time = {20.0, 21};
  cfg.threads = 1;
  const ScenarioResult res = run_scenario(cfg);

  const Table& series = table_named(res, "time_series");
  REQUIRE(series.columns == std::vector<std::string>{"t", "envelope", "n_ex",
                                                     "gamma_out", "p0", "p1", "p2"});
  REQUIRE(series.rows.size() == 21);
  CHECK(series.rows.front()[0] == 0.0);
  CHECK(series.rows.back()[0] == 20.0);
  // The sample at the pulse center reports the peak amplitude exactly, and
  // the tabulated envelope matches the analytic Gaussian everywhere.
  for (std::size_t i = 0; i < series.rows.size(); ++i) {
    const double t = series.rows[i][0];
    const double arg = (t - 5.0) / 2.0;
    CHECK(series.rows[i][1] == doctest::Approx(std::exp(-arg * arg)).epsilon(1e-12));
  }
  // Populations rise during the pulse and decay afterwards.
  CHECK(cell(series, 0, "n_ex") == 0.0);
  CHECK(cell(series, 5, "n_ex") > 1e-4);
  CHECK(cell(series, 20, "n_ex") < cell(series, 10, "n_ex"));
  CHECK(summary_value(res, "t_final") == 20.0);
  CHECK(summary_value(res, "p0_plus_p1") >
        summary_value(res, "p0"));  // some single-excitation weight survives
  CHECK(summary_value(res, "steps_accepted") > 0.0);

  cfg.drive.pulse.reset();
  CHECK_THROWS_AS(run_scenario(cfg), invalid_argument_error);
  cfg.drive.pulse = Pulse{1.0, 5.0, 2.0};
  cfg.time = {20.0, 1};
  CHECK_THROWS_AS(run_scenario(cfg), invalid_argument_error);
}

TEST_CASE("disorder sweep: seeded, thread-invariant, exact at zero disorder") {
  ScenarioConfig cfg = preset_config("disorder_sweep");
  cfg.sweep.reset();  // single cell column: the configured geometry
  cfg.geometry.n = 4;
  cfg.detector.n_phi = 16;
  cfg.disorder = DisorderConfig{{0.0, 0.08}, 4, 7};
  cfg.threads = 1;

  const ScenarioResult res = run_scenario(cfg);
  const Table& stats = table_named(res, "disorder");
  const Table& recs = table_named(res, "realizations");
  REQUIRE(stats.rows.size() == 2);
  REQUIRE(recs.rows.size() == 8);

  // Zero displacement reproduces the ordered array bit for bit, so the mean
  // over identical realizations collapses onto the baseline and the spread
  // vanishes identically.
  CHECK(cell(stats, 0, "epsilon") == 0.0);
  CHECK(cell(stats, 0, "mean_gamma_out") == cell(stats, 0, "ordered_gamma_out"));
  CHECK(cell(stats, 0, "mean_g2") == cell(stats, 0, "ordered_g2"));
  CHECK(cell(stats, 0, "std_gamma_out") == 0.0);
  CHECK(cell(stats, 0, "std_g2") == 0.0);

  // Finite displacement actually moves the emitters.
  CHECK(cell(stats, 1, "epsilon") == 0.08);
  CHECK(cell(stats, 1, "std_gamma_out") > 0.0);
  for (std::size_t r = 0; r < recs.rows.size(); ++r) {
    CHECK(cell(recs, r, "ok") == 1.0);
    CHECK(cell(recs, r, "n") == 4.0);
  }
  CHECK(cell(stats, 0, "n_ok") == 4.0);
  CHECK(cell(stats, 1, "n_failed") == 0.0);

  // Same seed, same answer; the thread count must not leak into the numbers.
  CHECK(results_identical(res, run_scenario(cfg)));
  ScenarioConfig threaded = cfg;
  threaded.threads = 3;
  CHECK(results_identical(res, run_scenario(threaded)));

  // A different seed draws different displacements at finite epsilon but the
  // zero-epsilon cell cannot depend on the seed at all.
  ScenarioConfig reseeded = cfg;
  reseeded.disorder->seed = 8;
  const ScenarioResult other = run_scenario(reseeded);
  const Table& other_stats = table_named(other, "disorder");
  CHECK(cell(other_stats, 0, "mean_gamma_out") == cell(stats, 0, "mean_gamma_out"));
  CHECK(cell(other_stats, 1, "mean_gamma_out") != cell(stats, 1, "mean_gamma_out"));

  ScenarioConfig bad = cfg;
  bad.sweep = SweepConfig{"spacing", {0.02}};
  CHECK_THROWS_AS(run_scenario(bad), invalid_argument_error);
  bad = cfg;
  bad.disorder.reset();
  CHECK_THROWS_AS(run_scenario(bad), invalid_argument_error);
  bad = cfg;
  bad.disorder->epsilons = {-0.01};
  CHECK_THROWS_AS(run_scenario(bad), invalid_argument_error);
  bad = cfg;
  bad.disorder->n_realizations = 0;
  CHECK_THROWS_AS(run_scenario(bad), invalid_argument_error);
}

TEST_CASE("model comparison pairs truncated and full solutions") {
  ScenarioConfig cfg = preset_config("model_comparison");
  cfg.geometry.n = 3;
  cfg.geometry.spacing = 0.06;
  cfg.sweep = SweepConfig{"rabi", {0.2}};
  cfg.threads = 1;
  const ScenarioResult res = run_scenario(cfg);

  const Table& t = table_named(res, "model_comparison");
  // 7 fixed columns + p0..p2 truncated + p0..p3 full for n = 3.
  REQUIRE(t.columns.size() == 14);
  CHECK(column_index(t, "p2_truncated") >= 0);
  CHECK(column_index(t, "p3_full") >= 0);
  REQUIRE(t.rows.size() == 1);
  CHECK(cell(t, 0, "rabi") == 0.2);
  // Weak drive keeps the truncated model honest to a few percent.
  CHECK(cell(t, 0, "n_ex_rel_dev") < 0.05);
  CHECK(cell(t, 0, "gamma_out_rel_dev") < 0.05);
  CHECK(cell(t, 0, "n_ex_full") > 0.0);

  // For two emitters the two-excitation basis already is the full model, so
  // both branches run the same computation and the deviation is exactly zero.
  const auto pair = model_comparison(2, 0.06, cfg.drive, {0.7});
  REQUIRE(pair.size() == 1);
  CHECK(pair[0].n_ex_rel_dev == 0.0);
  CHECK(pair[0].gamma_out_rel_dev == 0.0);

  CHECK_THROWS_AS(model_comparison(7, 0.06, cfg.drive, {0.5}), resource_limit_error);
  ScenarioConfig bad = cfg;
  bad.sweep = SweepConfig{"n", {3.0}};
  CHECK_THROWS_AS(run_scenario(bad), invalid_argument_error);
}

TEST_CASE("dispersion preset overlays finite-chain modes on the band") {
  ScenarioConfig cfg = preset_config("dispersion");
  cfg.geometry.n = 8;
  cfg.dispersion_k_points = 21;
  const ScenarioResult res = run_scenario(cfg);

  const Table& band = table_named(res, "band");
  REQUIRE(band.columns == std::vector<std::string>{"k", "kd_over_pi", "shift",
                                                   "decay", "inside_light_line"});
  REQUIRE(band.rows.size() == 21);
  const double k0 = 2.0 * M_PI;
  int skipped = 0;
  for (const auto& row : band.rows) {
    CHECK(row[1] == doctest::Approx(row[0] * 0.05 / M_PI).epsilon(1e-13));
    CHECK(row[4] == (row[0] < k0 ? 1.0 : 0.0));
    if (std::isnan(row[2])) {
      // Transverse branch inside the light cone: the lattice sum does not
      // converge there, and the row records that as NaN plus a note.
      CHECK(row[0] <= k0 + 1e-12);
      ++skipped;
    } else {
      CHECK(row[3] >= 0.0);
    }
  }
  CHECK(skipped >= 1);
  CHECK(skipped <= 3);
  CHECK(has_note_containing(res, "skipped"));

  const Table& modes = table_named(res, "modes");
  REQUIRE(modes.rows.size() == 8);
  for (const auto& row : modes.rows) {
    CHECK(row[2] > 0.0);       // overlap
    CHECK(row[2] <= 1.0 + 1e-12);
    CHECK(row[4] > 0.0);       // decay
  }
  CHECK(summary_value(res, "n") == 8.0);
  CHECK(summary_value(res, "k_light_line") == k0);

  cfg.dispersion_k_points = 1;
  CHECK_THROWS_AS(run_scenario(cfg), invalid_argument_error);
  cfg.dispersion_k_points = 21;
  cfg.geometry.kind = GeometryKind::ring;
  CHECK_THROWS_AS(run_scenario(cfg), invalid_argument_error);
}

}  // TEST_SUITE("scenarios")
