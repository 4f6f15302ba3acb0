#include "dipolesim/eigenmodes.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dipolesim/errors.hpp"

namespace dipolesim {

std::vector<CollectiveMode> effective_modes(const CouplingMatrices& couplings) {
  const int n = static_cast<int>(couplings.omega.rows());
  Dense heff = couplings.omega.cast<cplx>() +
               cplx(0.0, -0.5) * couplings.gamma.cast<cplx>();
  Eigen::ComplexEigenSolver<Dense> ces(heff);
  if (ces.info() != Eigen::Success)
    throw numeric_error("effective-Hamiltonian eigendecomposition failed for N = " +
                        std::to_string(n));

  std::vector<CollectiveMode> modes(n);
  for (int i = 0; i < n; ++i) {
    modes[i].shift = ces.eigenvalues()[i].real();
    modes[i].decay = -2.0 * ces.eigenvalues()[i].imag();
    modes[i].vector = ces.eigenvectors().col(i).normalized();
  }
  std::sort(modes.begin(), modes.end(), [](const CollectiveMode& a,
                                           const CollectiveMode& b) {
    if (a.decay != b.decay) return a.decay > b.decay;
    return std::abs(a.shift) < std::abs(b.shift);
  });
  for (int i = 0; i < n; ++i) modes[i].label = i;
  return modes;
}

CollectiveMode ring_mode(const EmitterArray& ring, int m) {
  const int n = ring.size();
  if (n < 1) throw invalid_argument_error("ring mode needs at least one emitter");
  const int m_max = (n - 1 + 1) / 2;  // ⌈(N−1)/2⌉
  if (std::abs(m) > m_max)
    throw invalid_argument_error("ring mode index " + std::to_string(m) +
                                 " outside {0, ±1, ..., ±" + std::to_string(m_max) +
                                 "}");

  // A make_ring array places emitters at equal angular steps, so only the
  // step index matters; verify the geometry is actually a ring.
  Vec3 center{0.0, 0.0, 0.0};
  for (const Vec3& p : ring.positions) center = center + p;
  center = center * (1.0 / n);
  const double radius = (ring.positions[0] - center).norm();
  for (const Vec3& p : ring.positions)
    if (std::abs((p - center).norm() - radius) > 1e-9 * std::max(radius, 1.0))
      throw invalid_argument_error("array is not a regular ring");

  const CouplingMatrices couplings = coupling_matrices(ring);
  cplx lam(0.0, -0.5 * couplings.gamma0);
  for (int j = 1; j < n; ++j) {
    const double phase = 2.0 * M_PI * m * j / n;
    lam += std::exp(cplx(0.0, phase)) *
           cplx(couplings.omega(0, j), -0.5 * couplings.gamma(0, j));
  }

  CollectiveMode mode;
  mode.label = m;
  mode.shift = lam.real();
  mode.decay = -2.0 * lam.imag();
  mode.vector.resize(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j)
    mode.vector[j] = scale * std::exp(cplx(0.0, 2.0 * M_PI * m * j / n));
  return mode;
}

double target_detuning(const CouplingMatrices& couplings, ModeSelection which) {
  const std::vector<CollectiveMode> modes = effective_modes(couplings);
  const CollectiveMode& edge = which == ModeSelection::most_superradiant
                                   ? modes.front()
                                   : modes.back();
  // Gather everything degenerate with the edge mode and prefer the smallest
  // |shift| among them (deterministic tie-break).
  double best_shift = edge.shift;
  for (const CollectiveMode& mode : modes) {
    if (std::abs(mode.decay - edge.decay) > 1e-12 * (1.0 + std::abs(edge.decay)))
      continue;
    if (std::abs(mode.shift) < std::abs(best_shift)) best_shift = mode.shift;
  }
  return -best_shift;
}

}  // namespace dipolesim
