#include "dipolesim/liouvillian.hpp"

#include <string>
#include <vector>

#include "dipolesim/errors.hpp"
#include "dipolesim/master.hpp"
#include "dipolesim/operators.hpp"

namespace dipolesim {

Eigen::SparseMatrix<cplx> vectorized_liouvillian(const Basis& basis, const Csr& h,
                                                 const CouplingMatrices& couplings,
                                                 int max_dim) {
  const int d = basis.dim();
  if (d > max_dim)
    throw resource_limit_error(
        "vectorized generator needs D <= " + std::to_string(max_dim) +
        " (dense-factorization budget), got D = " + std::to_string(d));
  if (h.rows() != d || h.cols() != d)
    throw invalid_argument_error("Hamiltonian dimension does not match the basis");

  const Csr damping = quadratic_operator(basis, couplings.gamma.cast<cplx>());
  const Csr k = Csr::add(h, damping, 1.0, cplx(0.0, -0.5));

  const cplx mi(0.0, -1.0);
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<std::size_t>(d) * (2 * k.nnz() + 4));

  // −i (𝟙 ⊗ K): one copy of K per column block.
  for (int r = 0; r < d; ++r)
    for (int p = k.row_ptr()[r]; p < k.row_ptr()[r + 1]; ++p)
      for (int j = 0; j < d; ++j)
        trips.emplace_back(j * d + r, j * d + k.col_idx()[p], mi * k.values()[p]);

  // +i (conj(K) ⊗ 𝟙): one scaled identity per K entry.
  for (int r = 0; r < d; ++r)
    for (int p = k.row_ptr()[r]; p < k.row_ptr()[r + 1]; ++p) {
      const cplx v = -mi * std::conj(k.values()[p]);
      for (int i = 0; i < d; ++i)
        trips.emplace_back(r * d + i, k.col_idx()[p] * d + i, v);
    }

  // Σ_m g_m (conj(L_m) ⊗ L_m): outer product of the channel's entry lists.
  for (const JumpChannel& jump : collective_jumps(basis, couplings)) {
    const Csr& l = jump.op;
    for (int j = 0; j < d; ++j)
      for (int pj = l.row_ptr()[j]; pj < l.row_ptr()[j + 1]; ++pj) {
        const cplx left = jump.rate * std::conj(l.values()[pj]);
        for (int i = 0; i < d; ++i)
          for (int pi = l.row_ptr()[i]; pi < l.row_ptr()[i + 1]; ++pi)
            trips.emplace_back(j * d + i, l.col_idx()[pj] * d + l.col_idx()[pi],
                               left * l.values()[pi]);
      }
  }

  Eigen::SparseMatrix<cplx> liou(d * d, d * d);
  liou.setFromTriplets(trips.begin(), trips.end());
  liou.makeCompressed();
  return liou;
}

}  // namespace dipolesim
