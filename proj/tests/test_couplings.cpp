#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "dipolesim/couplings.hpp"
#include "dipolesim/errors.hpp"
#include "dipolesim/greens.hpp"
#include "dipolesim/rng.hpp"

using namespace dipolesim;

namespace {

// Reference values computed once with a 50-digit implementation of the same
// formulas and frozen here; tolerances allow only rounding of the last bits.
constexpr double kTol = 1e-13;

EmitterArray pair_array(const Vec3& r, const Vec3& mu_i, const Vec3& mu_j) {
  EmitterArray a;
  a.positions = {Vec3(0, 0, 0), r};
  a.orientations = {mu_i.normalized(), mu_j.normalized()};
  return a;
}

}  // namespace

TEST_SUITE("couplings") {

TEST_CASE("propagator matrix elements") {
  const double k0 = 2.0 * M_PI;

  const Eigen::Matrix3cd g = greens_tensor(Vec3(0, 0.05, 0), k0).value;
  CHECK(std::abs(g(2, 2).real() - (-15.388360916107999601)) < kTol * 16);
  CHECK(std::abs(g(2, 2).imag() - 0.32678830136718114347) < kTol);

  // Transpose symmetry G(r) = G(r)^T and reciprocity G(−r) = G(r).
  const Eigen::Matrix3cd h = greens_tensor(Vec3(0.03, 0.04, 0.12), k0).value;
  const Eigen::Matrix3cd hm = greens_tensor(Vec3(-0.03, -0.04, -0.12), k0).value;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      CHECK(std::abs(h(a, b) - h(b, a)) < 1e-15);
      CHECK(std::abs(h(a, b) - hm(a, b)) < 1e-15);
    }

  const cplx skew =
      mu_g_mu(Vec3(0.03, 0.04, 0.12), Vec3(0, 0, 1), Vec3(1, 0, 1).normalized(), k0);
  CHECK(std::abs(skew.real() - 1.8036666522815799183) < kTol * 2);
  CHECK(std::abs(skew.imag() - 0.22132235366514548819) < kTol);

  CHECK_THROWS_AS(greens_tensor(Vec3(0, 0, 0), k0), singular_input_error);
}

TEST_CASE("pair rates against frozen references") {
  // Transverse: z dipoles separated along y by d = 0.05.
  const CouplingMatrices t =
      coupling_matrices(pair_array(Vec3(0, 0.05, 0), Vec3(0, 0, 1), Vec3(0, 0, 1)));
  CHECK(std::abs(t.omega(0, 1) - 23.082541374161999401) < kTol * 24);
  CHECK(std::abs(t.gamma(0, 1) - 0.98036490410154343041) < kTol);

  // Longitudinal: y dipoles separated along y by d = 0.1.
  const CouplingMatrices l =
      coupling_matrices(pair_array(Vec3(0, 0.1, 0), Vec3(0, 1, 0), Vec3(0, 1, 0)));
  CHECK(std::abs(l.omega(0, 1) - (-7.1255735529532267498)) < kTol * 8);
  CHECK(std::abs(l.gamma(0, 1) - 0.96107415460136540727) < kTol);

  // The diagonal is pinned exactly, not computed from the propagator.
  CHECK(t.omega(0, 0) == 0.0);
  CHECK(t.omega(1, 1) == 0.0);
  CHECK(t.gamma(0, 0) == t.gamma0);
  CHECK(t.gamma(1, 1) == t.gamma0);
  CHECK(t.omega(0, 1) == t.omega(1, 0));
  CHECK(t.gamma(0, 1) == t.gamma(1, 0));
}

TEST_CASE("ring couplings") {
  const EmitterArray ring = make_ring(4, 0.02, Vec3(0, 0, 1), Vec3(0, 0, 1));
  const CouplingMatrices c = coupling_matrices(ring);
  const double scale = 375.0 * kTol;
  CHECK(std::abs(c.omega(0, 1) - 374.9988052248621155) < scale);
  CHECK(std::abs(c.omega(0, 3) - 374.9988052248621155) < scale);
  CHECK(std::abs(c.omega(0, 2) - 131.56439995448577033) < scale);
  CHECK(std::abs(c.gamma(0, 1) - 0.99684439734233697025) < kTol);
  CHECK(std::abs(c.gamma(0, 3) - 0.99684439734233697025) < kTol);
  CHECK(std::abs(c.gamma(0, 2) - 0.99369413202181104931) < kTol);
}

TEST_CASE("dissipative matrix is positive semi-definite") {
  Rng rng(2026);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 7);
    EmitterArray a;
    for (int j = 0; j < n; ++j) {
      a.positions.emplace_back(rng.uniform_symmetric(0.5), rng.uniform_symmetric(0.5),
                               rng.uniform_symmetric(0.5));
      a.orientations.push_back(Vec3(rng.uniform_symmetric(1.0), rng.uniform_symmetric(1.0),
                                    rng.uniform_symmetric(1.0) + 1.5)
                                   .normalized());
    }
    bool distinct = true;
    for (int i = 0; i < n && distinct; ++i)
      for (int j = i + 1; j < n; ++j)
        if ((a.positions[i] - a.positions[j]).norm() < 1e-3) distinct = false;
    if (!distinct) continue;

    const CouplingMatrices c = coupling_matrices(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.gamma);
    CHECK(es.eigenvalues().minCoeff() > -1e-9 * c.gamma0);
  }
}

TEST_CASE("rates scale linearly with the bare decay rate") {
  EmitterArray a = pair_array(Vec3(0, 0.05, 0), Vec3(0, 0, 1), Vec3(0, 0, 1));
  const CouplingMatrices unit = coupling_matrices(a);
  a.gamma0 = 2.5;
  const CouplingMatrices scaled = coupling_matrices(a);
  CHECK(scaled.gamma0 == 2.5);
  CHECK(scaled.omega(0, 1) == doctest::Approx(2.5 * unit.omega(0, 1)).epsilon(1e-14));
  CHECK(scaled.gamma(0, 1) == doctest::Approx(2.5 * unit.gamma(0, 1)).epsilon(1e-14));
  CHECK(scaled.gamma(0, 0) == 2.5);
}

TEST_CASE("dissipative rate is continuous into the coincidence limit") {
  const CouplingMatrices c =
      coupling_matrices(pair_array(Vec3(0, 1e-5, 0), Vec3(0, 0, 1), Vec3(0, 0, 1)));
  // Γ_ij → Γ₀ as r → 0; at r = 1e−5 λ₀ the deviation is O((k₀r)²) ≈ 4e−9.
  CHECK(std::abs(c.gamma(0, 1) - c.gamma0) < 1e-8);
}

}  // TEST_SUITE
