#include <doctest.h>

#include <cmath>

#include "dipolesim/couplings.hpp"
#include "dipolesim/errors.hpp"
#include "dipolesim/master.hpp"
#include "dipolesim/observables.hpp"
#include "dipolesim/operators.hpp"
#include "dipolesim/rng.hpp"
#include "dipolesim/steady_state.hpp"

using namespace dipolesim;

namespace {

// Two-emitter chain along y, z dipoles, drive along the chain: the workhorse
// configuration for the frozen references below.
EmitterArray pair_chain(double d = 0.05) {
  return make_chain(2, d, Vec3(0, 1, 0), Vec3(0, 0, 1));
}

DensityState weak_drive_pair_state() {
  const EmitterArray a = pair_chain();
  Drive drive;
  drive.rabi = 0.1;
  drive.detuning = 0.0;
  const MasterEquation eq(a, coupling_matrices(a), build_basis(2, 2), drive);
  SteadyStateOptions opts;
  opts.method = SteadyStateMethod::null_space;
  opts.tol = 1e-12;
  return steady_state(eq, opts).state;
}

DensityState random_state(Rng& rng, const Basis& b) {
  Dense a(b.dim(), b.dim());
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j)
      a(i, j) = cplx(rng.uniform_symmetric(1.0), rng.uniform_symmetric(1.0));
  Dense rho = a * a.adjoint();
  rho /= rho.trace();
  return DensityState{rho, b, 0.0};
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("field coefficients against the frozen propagator") {
  // Detector broadside at (100, 0, 0): both emitters are equidistant, so
  // their z-components coincide. Values frozen from a 50-digit evaluation.
  const EmitterArray a = pair_chain();
  const FieldCoefficients c = field_coefficients(a, Vec3(100, 0, 0));
  REQUIRE(c.size() == 2);
  for (int j = 0; j < 2; ++j) {
    CHECK(std::abs(c.c[j].z.real() - 7.9577264984944929094e-4) < 1e-17);
    CHECK(std::abs(c.c[j].z.imag() - 1.282139675815902914e-6) < 1e-17);
  }
  CHECK_THROWS_AS(field_coefficients(a, a.positions[0]), singular_input_error);
}

TEST_CASE("weak drive pair against frozen references") {
  const DensityState rho = weak_drive_pair_state();
  const EmitterArray a = pair_chain();

  CHECK(std::abs(excited_population(rho) - 9.53699991227218305e-06) < 1e-10);

  const FieldCoefficients c = field_coefficients(a, Vec3(100, 0, 0));
  const double inten = intensity(rho, c);
  CHECK(std::abs(inten - 1.16802897789314460e-11) < 1e-16);
  // g² rests on doubly-excited populations of order 1e-10, so it tolerates
  // the steady-state residual amplified by four orders of magnitude.
  const double g2 = g2_zero(rho, c);
  CHECK(std::abs(g2 - 4.98070423870091588e+02) < 0.5);
}

TEST_CASE("pair correlations are hermitian and consistent") {
  Rng rng(81);
  const Basis b = build_basis(3, 3);
  const DensityState rho = random_state(rng, b);
  const Dense t = pair_correlations(rho);
  REQUIRE(t.rows() == 3);
  CHECK((t - t.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  for (int i = 0; i < 3; ++i) {
    const Dense s = lowering_operator(b, i).to_dense();
    for (int l = 0; l < 3; ++l) {
      const Dense sl = lowering_operator(b, l).to_dense();
      const cplx ref = (rho.rho * (s.adjoint() * sl)).trace();
      CHECK(std::abs(t(i, l) - ref) < 1e-12);
    }
  }
  // Diagonal of T reproduces the excited population.
  CHECK(excited_population(rho) == doctest::Approx(t.trace().real()).epsilon(1e-12));
}

TEST_CASE("pair-sum and operator g2 routes agree") {
  // Embed the same physical two-excitation state once in an n_max = 2 basis
  // (closed pair-sum route) and once in the full 3-emitter space (general
  // operator route); g² must not depend on the route.
  const EmitterArray a = make_chain(3, 0.06, Vec3(0, 1, 0), Vec3(0, 0, 1));
  Drive drive;
  drive.rabi = 0.8;
  drive.detuning = 0.2;

  const Basis b2 = build_basis(3, 2);
  const Basis b3 = build_basis(3, 3);
  SteadyStateOptions opts;
  opts.method = SteadyStateMethod::null_space;
  const DensityState rho2 =
      steady_state(MasterEquation(a, coupling_matrices(a), b2, drive), opts).state;

  DensityState rho3{Dense::Zero(b3.dim(), b3.dim()), b3, 0.0};
  for (int i = 0; i < b2.dim(); ++i)
    for (int j = 0; j < b2.dim(); ++j)
      rho3.rho(b3.index_of(b2.states[i]), b3.index_of(b2.states[j])) = rho2.rho(i, j);

  const FieldCoefficients c = field_coefficients(a, Vec3(70, 30, 0));
  CHECK(g2_zero(rho2, c) == doctest::Approx(g2_zero(rho3, c)).epsilon(1e-12));
  CHECK(intensity(rho2, c) == doctest::Approx(intensity(rho3, c)).epsilon(1e-12));
}

TEST_CASE("far-field correlations do not depend on the detector distance") {
  const DensityState rho = weak_drive_pair_state();
  const EmitterArray a = pair_chain();
  const Vec3 dir = Vec3(std::sin(0.7), -std::cos(0.7), 0);
  const double g2_near = g2_zero(rho, far_field_coefficients(a, dir * 100.0));
  const double g2_far = g2_zero(rho, far_field_coefficients(a, dir * 3e4));
  CHECK(g2_near == doctest::Approx(g2_far).epsilon(1e-12));

  // Intensities scale as exactly 1/R².
  const double i_near = intensity(rho, far_field_coefficients(a, dir * 100.0));
  const double i_far = intensity(rho, far_field_coefficients(a, dir * 3e4));
  CHECK(i_near / i_far == doctest::Approx(9e4).epsilon(1e-12));

  // The exact coefficients converge to the asymptotic ones at large R.
  const double i_exact = intensity(rho, field_coefficients(a, dir * 3e4));
  CHECK(i_exact == doctest::Approx(i_far).epsilon(1e-3));
}

TEST_CASE("dark directions are reported as undefined") {
  const Basis b = build_basis(2, 2);
  const DensityState vac = ground_state(b);
  const FieldCoefficients c = field_coefficients(pair_chain(), Vec3(100, 0, 0));
  CHECK_THROWS_AS(g2_zero(vac, c), undefined_correlation_error);

  // A z-polarized field carries nothing along x̂: filtering there is dark too.
  const DensityState rho = weak_drive_pair_state();
  CHECK_THROWS_AS(g2_zero_filtered(rho, c, CVec3(1, 0, 0)),
                  undefined_correlation_error);
  // For this broadside geometry the field is purely z-polarized, so the
  // z-filtered correlation equals the polarization-summed one.
  CHECK(g2_zero_filtered(rho, c, CVec3(0, 0, 1)) ==
        doctest::Approx(g2_zero(rho, c)).epsilon(1e-10));
}

TEST_CASE("directional intensity quadrature") {
  const DensityState rho = weak_drive_pair_state();
  const EmitterArray a = pair_chain();
  const double phi = 1.1;

  CHECK_THROWS_AS(directional_intensity(rho, a, phi, 0.01, 100.0, 4),
                  invalid_argument_error);  // even node count
  CHECK_THROWS_AS(directional_intensity(rho, a, phi, 0.01, 100.0, 3),
                  invalid_argument_error);  // too few nodes

  // Quadrature refinement converges.
  const double j9 = directional_intensity(rho, a, phi, 0.02, 100.0, 9);
  const double j33 = directional_intensity(rho, a, phi, 0.02, 100.0, 33);
  CHECK(j9 == doctest::Approx(j33).epsilon(1e-8));

  // Small-window limit: 𝒥 → (2Δφ)²/(2Δφ) · ∫ ≈ (2Δφ)²·I(φ)·... = 4Δφ²·2·I.
  const double dphi = 1e-4;
  const double j_small = directional_intensity(rho, a, phi, dphi, 100.0, 5);
  const Vec3 dir(std::sin(phi), -std::cos(phi), 0);
  const double i_phi = intensity(rho, far_field_coefficients(a, dir * 100.0));
  CHECK(j_small == doctest::Approx(8.0 * dphi * dphi * i_phi).epsilon(1e-6));

  // Mirror symmetry of the pair: 𝒥(φ) = 𝒥(−φ).
  const double jp = directional_intensity(rho, a, 0.8, 0.02, 100.0, 9);
  const double jm = directional_intensity(rho, a, -0.8, 0.02, 100.0, 9);
  CHECK(jp == doctest::Approx(jm).epsilon(1e-12));
}

TEST_CASE("emission rate matches the jump-channel accounting") {
  const EmitterArray a = make_chain(3, 0.07, Vec3(0, 1, 0), Vec3(0, 0, 1));
  const CouplingMatrices c = coupling_matrices(a);
  const Basis b = build_basis(3, 2);
  Drive drive;
  drive.rabi = 1.3;
  const MasterEquation eq(a, c, b, drive);
  SteadyStateOptions opts;
  opts.method = SteadyStateMethod::null_space;
  const DensityState rho = steady_state(eq, opts).state;

  double channel_sum = 0.0;
  for (const auto& j : eq.jumps()) {
    const Dense l = j.op.to_dense();
    channel_sum += j.rate * (l * rho.rho * l.adjoint()).trace().real();
  }
  CHECK(total_emission_rate(rho, c) == doctest::Approx(channel_sum).epsilon(1e-10));
}

TEST_CASE("manifold populations") {
  Rng rng(82);
  const Basis b = build_basis(4, 3);
  const DensityState rho = random_state(rng, b);
  const auto p = manifold_populations(rho);
  REQUIRE(p.size() == 4);
  double sum = 0.0, weighted = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    CHECK(p[n] >= 0.0);
    sum += p[n];
    weighted += static_cast<double>(n) * p[n];
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(weighted == doctest::Approx(excited_population(rho)).epsilon(1e-12));
}

TEST_CASE("angular scan finds the broadside maximum") {
  const DensityState rho = weak_drive_pair_state();
  const EmitterArray a = pair_chain();

  std::vector<double> grid;
  for (int i = 0; i < 72; ++i) grid.push_back(-M_PI + i * (2.0 * M_PI / 72.0));
  DetectorParams det;
  const AngularScan scan = angular_scan(rho, a, grid, det);
  REQUIRE(scan.points.size() == grid.size());
  REQUIRE(scan.argmax >= 0);
  for (const auto& pt : scan.points) CHECK(pt.ok);

  // Thread count must not change a single bit of the result.
  const AngularScan scan1 = angular_scan(rho, a, grid, det, 1);
  const AngularScan scan3 = angular_scan(rho, a, grid, det, 3);
  CHECK(scan1.argmax == scan3.argmax);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(scan1.points[i].j_phi == scan3.points[i].j_phi);
    CHECK(scan1.points[i].g2 == scan3.points[i].g2);
  }

  CHECK(scan.j_max == scan.points[scan.argmax].j_phi);

  // The scan over the vacuum fails pointwise but never aborts.
  const AngularScan dark = angular_scan(ground_state(rho.basis), a, grid, det);
  CHECK(dark.argmax == -1);
  for (const auto& pt : dark.points) {
    CHECK_FALSE(pt.ok);
    CHECK_FALSE(pt.error.empty());
  }
}

}  // TEST_SUITE
