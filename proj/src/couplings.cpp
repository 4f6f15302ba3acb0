#include "dipolesim/couplings.hpp"

#include "dipolesim/greens.hpp"

namespace dipolesim {

CouplingMatrices coupling_matrices(const EmitterArray& array) {
  validate_array(array);
  const int n = array.size();
  const double k0 = array.k0();
  const double c = 3.0 * M_PI * array.gamma0 / k0;

  CouplingMatrices out;
  out.gamma0 = array.gamma0;
  out.omega = Eigen::MatrixXd::Zero(n, n);
  out.gamma = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    out.gamma(i, i) = array.gamma0;
    for (int j = i + 1; j < n; ++j) {
      const cplx g = mu_g_mu(array.positions[i] - array.positions[j],
                             array.orientations[i], array.orientations[j], k0);
      const double om = -c * g.real();
      const double ga = 2.0 * c * g.imag();
      out.omega(i, j) = out.omega(j, i) = om;
      out.gamma(i, j) = out.gamma(j, i) = ga;
    }
  }
  return out;
}

}  // namespace dipolesim
