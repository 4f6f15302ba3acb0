#include "dipolesim/hamiltonian.hpp"

#include <tuple>

#include "dipolesim/operators.hpp"

namespace dipolesim {

std::vector<cplx> drive_amplitudes(const EmitterArray& array, const Drive& drive) {
  validate_drive(drive);
  std::vector<cplx> d(array.size(), cplx(0.0, 0.0));
  for (int j = 0; j < array.size(); ++j) {
    if (!array.is_driven(j)) continue;
    const double phase = -drive.k_vec.dot(array.positions[j]);
    d[j] = drive.polarization.bdot(CVec3(array.orientations[j])) *
           std::exp(cplx(0.0, phase));
  }
  return d;
}

Csr drive_operator(const Basis& basis, const EmitterArray& array, const Drive& drive) {
  const std::vector<cplx> d = drive_amplitudes(array, drive);
  std::vector<std::tuple<int, int, cplx>> trips;
  for (int col = 0; col < basis.dim(); ++col) {
    const std::uint32_t s = basis.states[col];
    for (int j = 0; j < basis.n_emitters; ++j) {
      if (d[j] == cplx(0.0, 0.0)) continue;
      const std::uint32_t bit = 1u << j;
      if (s & bit) {
        trips.emplace_back(basis.index_of(s ^ bit), col, std::conj(d[j]));  // σ⁻_j
      } else {
        const int up = basis.index_of(s | bit);
        if (up >= 0) trips.emplace_back(up, col, d[j]);  // σ⁺_j, truncation-projected
      }
    }
  }
  return Csr::from_triplets(basis.dim(), basis.dim(), std::move(trips));
}

Csr static_hamiltonian(const Basis& basis, const CouplingMatrices& couplings,
                       double detuning) {
  Dense m = couplings.omega.cast<cplx>();
  for (int j = 0; j < basis.n_emitters; ++j) m(j, j) = detuning;
  return quadratic_operator(basis, m);
}

Csr hamiltonian(const EmitterArray& array, const CouplingMatrices& couplings,
                const Basis& basis, const Drive& drive, double t) {
  const Csr h0 = static_hamiltonian(basis, couplings, drive.detuning);
  const double envelope = drive.envelope(t);
  if (envelope == 0.0) return h0;
  const Csr w = drive_operator(basis, array, drive);
  return Csr::add(h0, w, 1.0, 0.5 * envelope);
}

}  // namespace dipolesim
