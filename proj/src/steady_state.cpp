#include "dipolesim/steady_state.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "dipolesim/errors.hpp"
#include "dipolesim/hamiltonian.hpp"
#include "dipolesim/integrator.hpp"
#include "dipolesim/liouvillian.hpp"

namespace dipolesim {

std::string to_string(SteadyStateMethod method) {
  switch (method) {
    case SteadyStateMethod::integration: return "integration";
    case SteadyStateMethod::null_space: return "null-space";
    case SteadyStateMethod::krylov: return "krylov";
  }
  return "unknown";
}

SteadyStateMethod steady_state_method_from_string(const std::string& name) {
  if (name == "integration") return SteadyStateMethod::integration;
  if (name == "null-space" || name == "null_space") return SteadyStateMethod::null_space;
  if (name == "krylov") return SteadyStateMethod::krylov;
  throw invalid_argument_error("unknown steady-state method '" + name + "'");
}

namespace {

double physical_residual(const MasterEquation& eq, const Dense& rho, Dense& buf,
                         RhsWorkspace& ws) {
  eq.rhs(0.0, rho, buf, ws);
  return std::sqrt(simd().znorm2sq(static_cast<std::size_t>(buf.size()), buf.data()));
}

SteadyStateReport solve_by_integration(const MasterEquation& eq, double tol,
                                       const SteadyStateOptions& opts) {
  IntegratorOptions iopts;
  iopts.stop_below_residual = tol;
  iopts.max_steps = opts.max_steps;
  Trajectory traj = evolve(eq, ground_state(eq.basis()), 0.0, opts.max_time, iopts);
  if (!traj.stats.stopped_on_residual)
    throw convergence_failure_error(
        "steady-state integration stalled: residual " +
        std::to_string(traj.stats.final_residual) + " after t = " +
        std::to_string(opts.max_time) + "/Γ₀ (target " + std::to_string(tol) + ")");
  SteadyStateReport report;
  report.state = DensityState{traj.final_state(), eq.basis(), traj.times.back()};
  report.method = SteadyStateMethod::integration;
  report.residual = traj.stats.final_residual;
  report.iterations = traj.stats.steps_accepted;
  return report;
}

SteadyStateReport solve_by_null_space(const MasterEquation& eq, double tol,
                                      const SteadyStateOptions& opts) {
  const Basis& basis = eq.basis();
  const int d = basis.dim();
  const Csr h = hamiltonian(eq.array(), eq.couplings(), basis, eq.drive(), 0.0);
  Dense gen = Dense(
      vectorized_liouvillian(basis, h, eq.couplings(), opts.null_space_max_dim));

  // Shifted inverse iteration toward the zero eigenvalue. The shift keeps the
  // factorization honest (the generator itself is exactly singular).
  const double shift = 1e-10 * eq.couplings().gamma0;
  for (int i = 0; i < d * d; ++i) gen(i, i) -= shift;
  Eigen::PartialPivLU<Dense> lu(gen);
  for (int i = 0; i < d * d; ++i) gen(i, i) += shift;  // restore for residuals

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(d * d);
  x[0] = 1.0;  // vec of |g⟩⟨g|, a good overlap with any driven steady state
  Dense rho(d, d), buf(d, d);
  RhsWorkspace ws;
  SteadyStateReport report;
  report.method = SteadyStateMethod::null_space;

  for (int iter = 1; iter <= 100; ++iter) {
    x = lu.solve(x);
    x /= x.norm();
    rho = Eigen::Map<const Dense>(x.data(), d, d);
    const cplx tr = rho.trace();
    if (std::abs(tr) < 1e-12)
      throw numeric_error("null-space vector has vanishing trace; generator "
                          "kernel is not a physical state");
    rho /= tr;
    hermitize(rho);
    trace_normalize(rho);
    report.iterations = iter;
    report.residual = physical_residual(eq, rho, buf, ws);
    if (report.residual < tol) {
      report.state = DensityState{std::move(rho), basis, 0.0};
      return report;
    }
  }
  throw convergence_failure_error(
      "null-space inverse iteration stalled at residual " +
      std::to_string(report.residual) + " (target " + std::to_string(tol) + ")");
}

// Exact inverse of the no-jump superoperator. With the full kernel
// K = K₀ + (Ω_p/2)W = V E V⁻¹, the map X ↦ −i(KX − XK†) is diagonal in the
// transformed entries Y = V⁻¹X V⁻†, with denominators E_a − conj(E_b).
// Including the drive in K matters: at strong driving the ground state
// hybridizes with the bright modes, and a drive-free preconditioner leaves
// an O(Ω_p) perturbation for GMRES to grind through. Near-stationary
// denominators (the undriven ground-ground direction, or pairs of extremely
// dark modes) are inverted at the trace-pinning scale instead, which is what
// the pinned generator actually does along them. Jump refill terms and the
// pin itself stay with GMRES.
class KernelPreconditioner {
 public:
  KernelPreconditioner(const MasterEquation& eq, double pin)
      : pin_(pin), floor_(1e-6 * eq.couplings().gamma0) {
    Dense k = eq.drive_free_kernel().to_dense();
    if (eq.driven())
      k += (eq.drive().envelope(0.0) / 2.0) * eq.drive_term().to_dense();
    Eigen::ComplexEigenSolver<Dense> ces(k);
    if (ces.info() != Eigen::Success)
      throw numeric_error("eigendecomposition of the no-jump kernel failed; "
                          "cannot build the preconditioner");
    vals_ = ces.eigenvalues();
    vecs_ = ces.eigenvectors();
    inv_ = vecs_.partialPivLu().inverse();
  }

  // x ← M⁻¹ y
  void apply(const Dense& y, Dense& x) const {
    Dense t = inv_ * y * inv_.adjoint();
    const int d = static_cast<int>(vals_.size());
    for (int b = 0; b < d; ++b)
      for (int a = 0; a < d; ++a) {
        const cplx den = vals_[a] - std::conj(vals_[b]);
        if (std::abs(den) < floor_)
          t(a, b) /= pin_;
        else
          t(a, b) *= cplx(0.0, 1.0) / den;
      }
    x.noalias() = vecs_ * t * vecs_.adjoint();
  }

 private:
  Eigen::VectorXcd vals_;
  Dense vecs_, inv_;
  double pin_, floor_;
};

SteadyStateReport solve_by_krylov(const MasterEquation& eq, double tol,
                                  const SteadyStateOptions& opts) {
  const int d = eq.dim();
  const std::size_t nsq = static_cast<std::size_t>(d) * d;
  const double pin = eq.couplings().gamma0;
  const auto& ops = simd();
  RhsWorkspace ws;

  // Trace-pinned generator: A(X) = L(X) + pin·tr(X)·|g⟩⟨g|. A is nonsingular
  // whenever the steady state is unique, and A(ρ) = pin·|g⟩⟨g| holds exactly
  // for the unit-trace steady state.
  auto apply_gen = [&](const Dense& in, Dense& out) {
    eq.rhs(0.0, in, out, ws);
    out(0, 0) += pin * in.trace();
  };

  KernelPreconditioner precond(eq, pin);
  const int m = std::max(2, opts.restart);
  std::vector<Dense> v(m + 1);
  for (auto& vec : v) vec.resize(d, d);
  Dense x = ground_state(eq.basis()).rho;
  Dense r(d, d), z(d, d), rho(d, d), buf(d, d);
  Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(m + 1, m);
  Eigen::VectorXcd g(m + 1), sn(m);
  Eigen::VectorXd cs(m);

  SteadyStateReport report;
  report.method = SteadyStateMethod::krylov;
  double tol_lin = 0.5 * tol;

  for (int round = 0; round < opts.max_restarts; ++round) {
    // r = b − A(x), with b = pin·|g⟩⟨g|.
    apply_gen(x, r);
    ++report.iterations;
    ops.zscale(nsq, cplx(-1.0, 0.0), r.data());
    r(0, 0) += pin;
    const double beta = std::sqrt(ops.znorm2sq(nsq, r.data()));

    int used = 0;
    if (beta > tol_lin) {
      v[0] = r;
      ops.zscale(nsq, cplx(1.0 / beta, 0.0), v[0].data());
      g.setZero();
      g[0] = beta;
      double res = beta;

      for (int j = 0; j < m; ++j) {
        precond.apply(v[j], z);
        apply_gen(z, v[j + 1]);
        ++report.iterations;
        for (int i = 0; i <= j; ++i) {
          const cplx hij = ops.zdotc(nsq, v[i].data(), v[j + 1].data());
          hess(i, j) = hij;
          ops.zaxpy(nsq, -hij, v[i].data(), v[j + 1].data());
        }
        const double hnext = std::sqrt(ops.znorm2sq(nsq, v[j + 1].data()));
        hess(j + 1, j) = hnext;
        if (hnext > 0.0)
          ops.zscale(nsq, cplx(1.0 / hnext, 0.0), v[j + 1].data());

        // Givens triangularization, updating the residual as we go.
        for (int i = 0; i < j; ++i) {
          const cplx a = hess(i, j), b = hess(i + 1, j);
          hess(i, j) = cs[i] * a + sn[i] * b;
          hess(i + 1, j) = -std::conj(sn[i]) * a + cs[i] * b;
        }
        const cplx a = hess(j, j), b = hess(j + 1, j);
        const double norm = std::sqrt(std::norm(a) + std::norm(b));
        if (norm == 0.0) {
          cs[j] = 1.0;
          sn[j] = 0.0;
        } else if (a == cplx(0.0, 0.0)) {
          cs[j] = 0.0;
          sn[j] = std::conj(b) / std::abs(b);
        } else {
          const cplx phase = a / std::abs(a);
          cs[j] = std::abs(a) / norm;
          sn[j] = phase * std::conj(b) / norm;
        }
        hess(j, j) = cs[j] * a + sn[j] * b;
        hess(j + 1, j) = 0.0;
        g[j + 1] = -std::conj(sn[j]) * g[j];
        g[j] *= cs[j];
        res = std::abs(g[j + 1]);
        used = j + 1;
        if (res <= tol_lin || hnext == 0.0) break;
      }

      // Back-substitution and right-preconditioned update x += M⁻¹(V·y).
      Eigen::VectorXcd y(used);
      for (int i = used - 1; i >= 0; --i) {
        cplx acc = g[i];
        for (int k2 = i + 1; k2 < used; ++k2) acc -= hess(i, k2) * y[k2];
        y[i] = acc / hess(i, i);
      }
      r.setZero();
      for (int i = 0; i < used; ++i)
        ops.zaxpy(nsq, y[i], v[i].data(), r.data());
      precond.apply(r, z);
      x += z;
      hermitize(x);
    }

    rho = x;
    trace_normalize(rho);
    report.residual = physical_residual(eq, rho, buf, ws);
    ++report.iterations;
    if (report.residual < tol) {
      report.state = DensityState{std::move(rho), eq.basis(), 0.0};
      return report;
    }
    // Converged linearly but not physically: the pinning scale hides some
    // mass, so tighten the linear target and keep going.
    if (beta <= tol_lin || used == 0) tol_lin *= 0.2;
  }
  throw convergence_failure_error(
      "GMRES steady-state solve stalled at residual " +
      std::to_string(report.residual) + " (target " + std::to_string(tol) + ")");
}

}  // namespace

SteadyStateReport steady_state(const MasterEquation& eq,
                               const SteadyStateOptions& opts) {
  if (eq.drive().time_dependent())
    throw invalid_argument_error("steady state is undefined for a pulsed drive");
  const double tol =
      opts.tol > 0.0 ? opts.tol : 1e-10 * eq.couplings().gamma0 * eq.dim();
  switch (opts.method) {
    case SteadyStateMethod::integration: return solve_by_integration(eq, tol, opts);
    case SteadyStateMethod::null_space: return solve_by_null_space(eq, tol, opts);
    case SteadyStateMethod::krylov: return solve_by_krylov(eq, tol, opts);
  }
  throw invalid_argument_error("unknown steady-state method");
}

}  // namespace dipolesim
