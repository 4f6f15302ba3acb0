#pragma once

#include <cstdint>
#include <vector>

#include "dipolesim/dense.hpp"
#include "dipolesim/vec3.hpp"

namespace dipolesim {

// Excitation-truncated product basis. A basis state is a bit pattern over the
// N emitters (bit j set = emitter j excited). States are ordered by
// excitation number, then numerically — a stable canonical order, so the
// n-excitation manifold occupies one contiguous index block.
struct Basis {
  int n_emitters = 0;
  int n_max = 0;
  std::vector<std::uint32_t> states;
  std::vector<int> manifold_offset;  // size n_max + 2; block n is [off[n], off[n+1])

  int dim() const { return static_cast<int>(states.size()); }
  int manifold_size(int n) const { return manifold_offset[n + 1] - manifold_offset[n]; }

  // Index of a bit pattern, or -1 when it lies outside the truncated space.
  int index_of(std::uint32_t pattern) const;
};

// D = sum_{k<=n_max} C(N,k). Throws resource_limit_error when D would exceed
// max_dim (the dense-state memory budget), invalid_argument_error for a bad
// truncation level.
Basis build_basis(int n, int n_max, int max_dim = 4096);

// Density operator snapshot in a given basis; time is in 1/Γ₀ units.
struct DensityState {
  Dense rho;
  Basis basis;
  double time = 0.0;

  int dim() const { return static_cast<int>(rho.rows()); }
};

// |ground><ground| in the canonical basis.
DensityState ground_state(const Basis& basis);

// Hermiticity / unit-trace / positivity checks (tolerances 1e-10 / 1e-9 /
// -1e-8). Throws numeric_error naming the violated invariant.
void validate_state(const DensityState& state);

}  // namespace dipolesim
