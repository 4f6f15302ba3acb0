#include "dipolesim/basis.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "dipolesim/errors.hpp"

namespace dipolesim {

namespace {

// Next bit pattern with the same popcount (Gosper's hack).
std::uint32_t next_same_popcount(std::uint32_t v) {
  const std::uint32_t c = v & -v;
  const std::uint32_t r = v + c;
  return (((r ^ v) >> 2) / c) | r;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

int Basis::index_of(std::uint32_t pattern) const {
  const int n = std::popcount(pattern);
  if (n > n_max) return -1;
  const auto lo = states.begin() + manifold_offset[n];
  const auto hi = states.begin() + manifold_offset[n + 1];
  const auto it = std::lower_bound(lo, hi, pattern);
  if (it == hi || *it != pattern) return -1;
  return static_cast<int>(it - states.begin());
}

Basis build_basis(int n, int n_max, int max_dim) {
  if (n < 1 || n > 30) throw invalid_argument_error("emitter count must be in [1, 30]");
  if (n_max < 1 || n_max > n)
    throw invalid_argument_error("truncation level must satisfy 1 <= n_max <= N");

  long long dim = 0;
  for (int k = 0; k <= n_max; ++k) dim += binomial(n, k);
  if (dim > max_dim)
    throw resource_limit_error("basis dimension " + std::to_string(dim) +
                               " exceeds the dense-state budget of " +
                               std::to_string(max_dim) + " states");

  Basis b;
  b.n_emitters = n;
  b.n_max = n_max;
  b.states.reserve(static_cast<std::size_t>(dim));
  b.manifold_offset.resize(n_max + 2);
  for (int k = 0; k <= n_max; ++k) {
    b.manifold_offset[k] = static_cast<int>(b.states.size());
    std::uint32_t v = (k == 0) ? 0u : ((1u << k) - 1u);
    const std::uint32_t limit = 1u << n;
    if (k == 0) {
      b.states.push_back(0u);
    } else {
      while (v < limit) {
        b.states.push_back(v);
        if (v == 0) break;
        const std::uint32_t nxt = next_same_popcount(v);
        if (nxt <= v) break;
        v = nxt;
      }
    }
  }
  b.manifold_offset[n_max + 1] = static_cast<int>(b.states.size());
  return b;
}

DensityState ground_state(const Basis& basis) {
  DensityState s;
  s.basis = basis;
  s.rho = Dense::Zero(basis.dim(), basis.dim());
  s.rho(0, 0) = 1.0;
  s.time = 0.0;
  return s;
}

void validate_state(const DensityState& state) {
  const int d = state.dim();
  if (d != state.basis.dim()) throw numeric_error("state/basis dimension mismatch");
  double herm = 0.0;
  for (int c = 0; c < d; ++c)
    for (int r = 0; r <= c; ++r)
      herm = std::max(herm, std::abs(state.rho(r, c) - std::conj(state.rho(c, r))));
  if (herm > 1e-10)
    throw numeric_error("density matrix violates Hermiticity (defect " + std::to_string(herm) + ")");
  const double tr = state.rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-9)
    throw numeric_error("density matrix trace deviates from 1 by " + std::to_string(tr - 1.0));
  Eigen::SelfAdjointEigenSolver<Dense> es(0.5 * (state.rho + state.rho.adjoint()),
                                          Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -1e-8)
    throw numeric_error("density matrix has negative eigenvalue " + std::to_string(min_eig));
}

}  // namespace dipolesim
