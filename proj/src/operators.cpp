#include "dipolesim/operators.hpp"

#include <bit>

#include "dipolesim/errors.hpp"

namespace dipolesim {

Csr lowering_operator(const Basis& basis, int j) {
  if (j < 0 || j >= basis.n_emitters)
    throw invalid_argument_error("emitter index out of range");
  const std::uint32_t bit = 1u << j;
  std::vector<std::tuple<int, int, cplx>> trips;
  for (int col = 0; col < basis.dim(); ++col) {
    const std::uint32_t s = basis.states[col];
    if (s & bit) trips.emplace_back(basis.index_of(s ^ bit), col, cplx(1.0, 0.0));
  }
  return Csr::from_triplets(basis.dim(), basis.dim(), std::move(trips));
}

Csr weighted_lowering_sum(const Basis& basis, const std::vector<cplx>& weights) {
  if (static_cast<int>(weights.size()) != basis.n_emitters)
    throw invalid_argument_error("weight vector length must equal the emitter count");
  std::vector<std::tuple<int, int, cplx>> trips;
  for (int col = 0; col < basis.dim(); ++col) {
    std::uint32_t s = basis.states[col];
    std::uint32_t rest = s;
    while (rest) {
      const int j = std::countr_zero(rest);
      rest &= rest - 1;
      trips.emplace_back(basis.index_of(s ^ (1u << j)), col, weights[j]);
    }
  }
  return Csr::from_triplets(basis.dim(), basis.dim(), std::move(trips));
}

Csr number_operator(const Basis& basis) {
  std::vector<std::tuple<int, int, cplx>> trips;
  for (int i = 0; i < basis.dim(); ++i) {
    const int n = std::popcount(basis.states[i]);
    if (n > 0) trips.emplace_back(i, i, cplx(n, 0.0));
  }
  return Csr::from_triplets(basis.dim(), basis.dim(), std::move(trips));
}

Csr quadratic_operator(const Basis& basis, const Dense& m) {
  if (m.rows() != basis.n_emitters || m.cols() != basis.n_emitters)
    throw invalid_argument_error("coefficient matrix shape must be N x N");
  std::vector<std::tuple<int, int, cplx>> trips;
  for (int col = 0; col < basis.dim(); ++col) {
    const std::uint32_t s = basis.states[col];
    std::uint32_t occ = s;
    while (occ) {
      const int j = std::countr_zero(occ);
      occ &= occ - 1;
      const std::uint32_t lowered = s ^ (1u << j);
      // i == j (diagonal) plus every empty site i of the lowered pattern
      if (m(j, j) != 0.0) trips.emplace_back(col, col, m(j, j));
      for (int i = 0; i < basis.n_emitters; ++i) {
        if (i == j || (lowered & (1u << i))) continue;
        if (m(i, j) == 0.0) continue;
        trips.emplace_back(basis.index_of(lowered | (1u << i)), col, m(i, j));
      }
    }
  }
  return Csr::from_triplets(basis.dim(), basis.dim(), std::move(trips));
}

}  // namespace dipolesim
