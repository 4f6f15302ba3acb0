#include <doctest.h>

#include <cmath>

#include "dipolesim/couplings.hpp"
#include "dipolesim/eigenmodes.hpp"
#include "dipolesim/errors.hpp"

using namespace dipolesim;

TEST_SUITE("eigenmodes") {

TEST_CASE("decay rates sum to the total and are sorted") {
  const EmitterArray a = make_chain(6, 0.07, Vec3(0, 1, 0), Vec3(0, 0, 1));
  const CouplingMatrices c = coupling_matrices(a);
  const auto modes = effective_modes(c);
  REQUIRE(modes.size() == 6);

  double sum = 0.0;
  for (const auto& m : modes) sum += m.decay;
  // tr(Ω − iΓ/2) is −i·N·Γ₀/2, so the decay rates add up to N·Γ₀.
  CHECK(sum == doctest::Approx(6.0 * c.gamma0).epsilon(1e-10));

  for (std::size_t i = 0; i + 1 < modes.size(); ++i)
    CHECK(modes[i].decay >= modes[i + 1].decay - 1e-12);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    CHECK(modes[i].label == static_cast<int>(i));
    CHECK(std::abs(modes[i].vector.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("modes satisfy the eigenvalue equation") {
  const EmitterArray a = make_chain(5, 0.06, Vec3(0, 1, 0), Vec3(0, 0, 1));
  const CouplingMatrices c = coupling_matrices(a);
  const Dense heff =
      c.omega.cast<cplx>() - cplx(0, 0.5) * c.gamma.cast<cplx>();
  for (const auto& m : effective_modes(c)) {
    const cplx lambda(m.shift, -0.5 * m.decay);
    CHECK((heff * m.vector - lambda * m.vector).norm() < 1e-10);
  }
}

TEST_CASE("dicke pair modes") {
  const EmitterArray a = make_chain(2, 0.004, Vec3(1, 0, 0), Vec3(0, 0, 1));
  const CouplingMatrices c = coupling_matrices(a);
  const auto modes = effective_modes(c);
  REQUIRE(modes.size() == 2);
  // Bright mode decay Γ₀ + Γ₁₂ → 2Γ₀, dark mode Γ₀ − Γ₁₂ → 0; the bright
  // shift equals +Ω₁₂ and the dark shift −Ω₁₂.
  CHECK(std::abs(modes[0].decay - 2.0) < 1e-3);
  CHECK(std::abs(modes[1].decay - 0.0) < 1e-3);
  CHECK(modes[0].shift == doctest::Approx(c.omega(0, 1)).epsilon(1e-10));
  CHECK(modes[1].shift == doctest::Approx(-c.omega(0, 1)).epsilon(1e-10));
}

TEST_CASE("ring mode matches the numeric spectrum") {
  const EmitterArray ring = make_ring(4, 0.02, Vec3(0, 0, 1), Vec3(0, 0, 1));
  const CollectiveMode m0 = ring_mode(ring, 0);

  // Frozen reference from a 50-digit evaluation of the analytic sums.
  CHECK(std::abs(m0.shift - 881.56201040421000133) < 1e-9);
  CHECK(std::abs(m0.decay - 3.9873829267064849898) < 1e-12);

  // The same eigenvalue must appear in the numeric decomposition.
  const auto modes = effective_modes(coupling_matrices(ring));
  double best = 1e30;
  for (const auto& m : modes)
    best = std::min(best, std::hypot(m.shift - m0.shift, m.decay - m0.decay));
  CHECK(best < 1e-9);

  // m = 0 on this tiny ring is the most radiant mode of all.
  CHECK(std::abs(modes[0].decay - m0.decay) < 1e-10);
}

TEST_CASE("ring spectrum is symmetric in the mode index") {
  for (int n : {4, 5}) {
    const EmitterArray ring = make_ring(n, 0.05, Vec3(0, 0, 1), Vec3(0, 0, 1));
    const int m_max = (n - 1) / 2 + ((n - 1) % 2);  // ⌈(N−1)/2⌉
    for (int m = 1; m <= m_max; ++m) {
      const CollectiveMode plus = ring_mode(ring, m);
      const CollectiveMode minus = ring_mode(ring, -m);
      CHECK(plus.shift == doctest::Approx(minus.shift).epsilon(1e-12));
      CHECK(plus.decay == doctest::Approx(minus.decay).epsilon(1e-12));
    }
    CHECK_THROWS_AS(ring_mode(ring, m_max + 1), invalid_argument_error);
  }

  const EmitterArray chain = make_chain(4, 0.05, Vec3(0, 1, 0), Vec3(0, 0, 1));
  CHECK_THROWS_AS(ring_mode(chain, 0), invalid_argument_error);
}

TEST_CASE("targeting picks the right detuning") {
  const EmitterArray a = make_chain(5, 0.08, Vec3(0, 1, 0), Vec3(0, 0, 1));
  const CouplingMatrices c = coupling_matrices(a);
  const auto modes = effective_modes(c);
  CHECK(target_detuning(c, ModeSelection::most_superradiant) ==
        doctest::Approx(-modes.front().shift).epsilon(1e-12));
  CHECK(target_detuning(c, ModeSelection::most_subradiant) ==
        doctest::Approx(-modes.back().shift).epsilon(1e-12));
}

}  // TEST_SUITE
