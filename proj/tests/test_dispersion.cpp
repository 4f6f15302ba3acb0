#include <doctest.h>

#include <cmath>

#include "dipolesim/couplings.hpp"
#include "dipolesim/dispersion.hpp"
#include "dipolesim/greens.hpp"
#include "dipolesim/eigenmodes.hpp"
#include "dipolesim/errors.hpp"

using namespace dipolesim;

TEST_SUITE("dispersion") {

TEST_CASE("band energies against frozen closed forms") {
  // References from a 50-digit polylog evaluation of the lattice sums
  // at d = 0.05, k in units of 1/λ₀ (so k₀ = 2π and k = π is half of k₀).
  const Vec3 transverse(0, 0, 1), longitudinal(0, 1, 0);

  const cplx t_half = chain_dispersion(M_PI, 0.05, transverse);
  CHECK(std::abs(t_half.real() - 54.548906223053206144) < 1e-8);
  CHECK(std::abs(-2.0 * t_half.imag() - 9.375) < 1e-9);

  const cplx l_half = chain_dispersion(M_PI, 0.05, longitudinal);
  CHECK(std::abs(l_half.real() - (-121.57726637743804458)) < 1e-8);
  CHECK(std::abs(-2.0 * l_half.imag() - 11.25) < 1e-9);

  // Outside the light line (k = 3π > k₀) the band is lossless: the analytic
  // decay is ~1e-50, anything below 1e-8 is summation noise.
  const cplx t_out = chain_dispersion(3.0 * M_PI, 0.05, transverse);
  CHECK(std::abs(t_out.real() - 43.125479588411411345) < 1e-8);
  CHECK(std::abs(-2.0 * t_out.imag()) < 1e-8);
}

TEST_CASE("band matches a brute-force lattice sum") {
  // Independent check at a generic point: sum the couplings of a very long
  // finite chain with the Bloch phase. The tail falls off as 1/j, so
  // compare against two cutoffs to confirm the extrapolated agreement.
  const double d = 0.08, k = 0.6 * M_PI / d;
  const Vec3 mu(0, 0, 1);
  const cplx band = chain_dispersion(k, d, mu);

  auto partial = [&](int jmax) {
    cplx s(0.0, -0.5);
    for (int j = 1; j <= jmax; ++j) {
      const cplx g = mu_g_mu(Vec3(0, j * d, 0), mu, mu, 2.0 * M_PI);
      const cplx pair = -3.0 * M_PI / (2.0 * M_PI) * g;  // Ω − iΓ/2 per side
      s += 2.0 * std::cos(k * j * d) * pair;
    }
    return s;
  };
  // Richardson-style average of two long partial sums damps the 1/j tail.
  const cplx s1 = partial(20000), s2 = partial(20001);
  CHECK(std::abs(0.5 * (s1 + s2) - band) < 1e-2);
}

TEST_CASE("light line divergence raises for transverse bands") {
  CHECK_THROWS_AS(chain_dispersion(2.0 * M_PI, 0.05, Vec3(0, 0, 1)),
                  convergence_failure_error);
  // The longitudinal band stays finite at the light line (no 1/j series).
  CHECK_NOTHROW(chain_dispersion(2.0 * M_PI, 0.05, Vec3(0, 1, 0)));
}

TEST_CASE("quasi-momentum recovery from standing waves") {
  const int n = 21;
  const double d = 0.07;
  for (int m : {1, 5, 13, 20}) {
    const double km = m * M_PI / ((n + 1) * d);
    Eigen::VectorXcd mode(n);
    for (int j = 0; j < n; ++j) mode(j) = std::sin(km * d * (j + 1));
    mode.normalize();
    const QuasiMomentum q = assign_quasi_momentum(mode, d);
    CHECK(q.k == doctest::Approx(km).epsilon(1e-12));
    CHECK(q.overlap > 0.999999);
  }

  // A random vector has no clean assignment: overlap must come out poor.
  Eigen::VectorXcd junk(n);
  for (int j = 0; j < n; ++j) junk(j) = cplx(std::cos(7.1 * j * j), std::sin(3.3 * j));
  junk.normalize();
  CHECK(assign_quasi_momentum(junk, d).overlap < 0.9);
}

TEST_CASE("finite chain modes approach the band deep inside the light cone") {
  // N = 40 transverse chain at d = 0.05: compare each well-formed standing
  // wave against the infinite-chain band. Away from the light line the
  // finite-size deviation is below a few percent.
  const int n = 40;
  const double d = 0.05;
  const EmitterArray a = make_chain(n, d, Vec3(0, 1, 0), Vec3(0, 0, 1));
  const auto modes = effective_modes(coupling_matrices(a));
  const double k0 = 2.0 * M_PI;
  const double spacing = M_PI / ((n + 1) * d);

  int compared = 0;
  double min_decay = 1e30;
  for (const auto& m : modes) {
    min_decay = std::min(min_decay, m.decay);
    const QuasiMomentum q = assign_quasi_momentum(m.vector, d);
    if (q.overlap < 0.95) continue;
    if (q.k > k0 - 2.0 * spacing && q.k < k0 + 2.0 * spacing) continue;
    const cplx band = chain_dispersion(q.k, d, Vec3(0, 0, 1));
    if (q.k < k0) {
      CHECK(std::abs(m.shift - band.real()) < 0.02 * std::abs(band.real()));
      ++compared;
    } else {
      // Beyond the light line the band is lossless; a finite chain radiates
      // only through its ends, so every guided mode stays below Γ₀ and the
      // rate keeps falling with distance from the light line.
      CHECK(m.decay < 1.0);
      if (q.k > k0 + 5.0 * spacing) CHECK(m.decay < 0.2);
      ++compared;
    }
  }
  CHECK(compared >= 25);
  // The best-guided mode of 40 emitters is already darker than 1e-4·Γ₀.
  CHECK(min_decay < 1e-4);
}

}  // TEST_SUITE
