#include "dipolesim/master.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>
#include <utility>

#include "dipolesim/errors.hpp"
#include "dipolesim/hamiltonian.hpp"
#include "dipolesim/operators.hpp"

namespace dipolesim {

std::vector<JumpChannel> collective_jumps(const Basis& basis,
                                          const CouplingMatrices& couplings) {
  const int n = basis.n_emitters;
  if (couplings.gamma.rows() != n)
    throw invalid_argument_error("decay matrix size does not match emitter count");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(couplings.gamma);
  if (es.info() != Eigen::Success)
    throw numeric_error("decay matrix eigendecomposition failed");

  const double floor_tol = 1e-14 * couplings.gamma0;
  const double neg_tol = -1e-9 * couplings.gamma0;
  std::vector<JumpChannel> jumps;
  jumps.reserve(n);
  for (int m = 0; m < n; ++m) {
    const double g = es.eigenvalues()[m];
    if (g < neg_tol)
      throw numeric_error("decay matrix has negative eigenvalue " +
                          std::to_string(g) + "; dissipator is unphysical");
    if (g <= floor_tol) continue;  // dark to machine precision
    std::vector<cplx> w(n);
    for (int i = 0; i < n; ++i) w[i] = es.eigenvectors()(i, m);
    jumps.push_back({g, weighted_lowering_sum(basis, w)});
  }
  return jumps;
}

MasterEquation::MasterEquation(EmitterArray array, CouplingMatrices couplings,
                               Basis basis, Drive drive)
    : array_(std::move(array)),
      couplings_(std::move(couplings)),
      basis_(std::move(basis)),
      drive_(std::move(drive)) {
  validate_array(array_);
  validate_drive(drive_);
  if (couplings_.gamma.rows() != array_.size() || basis_.n_emitters != array_.size())
    throw invalid_argument_error("array, couplings and basis sizes disagree");

  Dense k0_coeff = couplings_.omega.cast<cplx>();
  for (int j = 0; j < array_.size(); ++j)
    k0_coeff(j, j) = drive_.detuning + cplx(0.0, -0.5) * couplings_.gamma(j, j);
  for (int i = 0; i < array_.size(); ++i)
    for (int j = 0; j < array_.size(); ++j)
      if (i != j) k0_coeff(i, j) += cplx(0.0, -0.5) * couplings_.gamma(i, j);
  k0_ = quadratic_operator(basis_, k0_coeff);

  w_ = drive_operator(basis_, array_, drive_);
  driven_ = w_.nnz() > 0 && (drive_.rabi != 0.0 || drive_.pulse.has_value());
  jumps_ = collective_jumps(basis_, couplings_);
}

void MasterEquation::rhs(double t, const Dense& rho, Dense& out,
                         RhsWorkspace& ws) const {
  const int d = dim();
  if (rho.rows() != d || rho.cols() != d)
    throw invalid_argument_error("state dimension does not match the basis");
  if (out.rows() != d || out.cols() != d) out.resize(d, d);
  ws.resize(d);

  const std::size_t nsq = static_cast<std::size_t>(d) * d;
  const double env = driven_ ? drive_.envelope(t) : 0.0;

  ws.p.setZero();
  ws.q.setZero();
  k0_.axpy_left(1.0, rho, ws.p);
  k0_.axpy_right_adjoint(1.0, rho, ws.q);
  if (env != 0.0) {
    w_.axpy_left(0.5 * env, rho, ws.p);
    w_.axpy_right_adjoint(0.5 * env, rho, ws.q);
  }
  simd().anti_herm_combine(nsq, out.data(), ws.p.data(), ws.q.data());

  for (const JumpChannel& jump : jumps_) {
    ws.p.setZero();
    jump.op.axpy_left(1.0, rho, ws.p);
    jump.op.axpy_right_adjoint(jump.rate, ws.p, out);
  }
}

Dense lindblad_rhs(const DensityState& rho, const Csr& h,
                   const CouplingMatrices& couplings) {
  const int d = rho.dim();
  if (h.rows() != d || h.cols() != d)
    throw invalid_argument_error("Hamiltonian dimension does not match the state");

  const Csr damping = quadratic_operator(rho.basis, couplings.gamma.cast<cplx>());
  const Csr k = Csr::add(h, damping, 1.0, cplx(0.0, -0.5));

  Dense p = Dense::Zero(d, d);
  Dense q = Dense::Zero(d, d);
  Dense out(d, d);
  k.axpy_left(1.0, rho.rho, p);
  k.axpy_right_adjoint(1.0, rho.rho, q);
  simd().anti_herm_combine(static_cast<std::size_t>(d) * d, out.data(), p.data(),
                           q.data());
  for (const JumpChannel& jump : collective_jumps(rho.basis, couplings)) {
    p.setZero();
    jump.op.axpy_left(1.0, rho.rho, p);
    jump.op.axpy_right_adjoint(jump.rate, p, out);
  }
  return out;
}

void hermitize(Dense& rho) {
  const int d = static_cast<int>(rho.rows());
  for (int j = 0; j < d; ++j) {
    rho(j, j) = cplx(rho(j, j).real(), 0.0);
    for (int i = j + 1; i < d; ++i) {
      const cplx v = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
      rho(i, j) = v;
      rho(j, i) = std::conj(v);
    }
  }
}

double trace_normalize(Dense& rho) {
  const double tr = rho.trace().real();
  if (!(tr > 0.0))
    throw numeric_error("density matrix trace " + std::to_string(tr) +
                        " is not positive; state has degenerated");
  rho *= cplx(1.0 / tr, 0.0);
  return tr;
}

double trace_distance(const Dense& a, const Dense& b) {
  Eigen::SelfAdjointEigenSolver<Dense> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace dipolesim
