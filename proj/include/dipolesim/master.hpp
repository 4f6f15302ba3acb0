#pragma once

#include <vector>

#include "dipolesim/basis.hpp"
#include "dipolesim/couplings.hpp"
#include "dipolesim/csr.hpp"
#include "dipolesim/drive.hpp"
#include "dipolesim/geometry.hpp"

namespace dipolesim {

// One collective decay channel. Diagonalizing the real symmetric decay matrix
// Γ = U diag(g) Uᵀ turns the double-sum dissipator into independent channels
// with jump operators L_m = Σ_i U_im σ⁻_i and rates g_m ≥ 0.
struct JumpChannel {
  double rate = 0.0;
  Csr op;
};

// Channels of Σ_ij Γ_ij σ⁻_i (·) σ⁺_j. Rates below 1e-14·Γ₀ are dropped;
// rates below −1e-9·Γ₀ mean the decay matrix is not positive semidefinite
// and raise numeric_error.
std::vector<JumpChannel> collective_jumps(const Basis& basis,
                                          const CouplingMatrices& couplings);

// Scratch buffers reused across rhs evaluations (no per-call allocation).
struct RhsWorkspace {
  Dense p, q;
  void resize(int d) {
    if (p.rows() != d || p.cols() != d) {
      p.resize(d, d);
      q.resize(d, d);
    }
  }
};

// dρ/dt = −i[H(t),ρ] + Σ_ij (Γ_ij/2)(2σ⁻_iρσ⁺_j − σ⁺_iσ⁻_jρ − ρσ⁺_iσ⁻_j),
// evaluated through the no-jump kernel K(t) = H(t) − (i/2)Σ_ij Γ_ij σ⁺_iσ⁻_j:
//
//   dρ/dt = −i(K(t)ρ − ρK(t)†) + Σ_m g_m L_m ρ L_m†.
//
// All time-independent pieces are assembled once at construction; rhs then
// costs a handful of sparse-dense products per call.
class MasterEquation {
 public:
  MasterEquation(EmitterArray array, CouplingMatrices couplings, Basis basis,
                 Drive drive);

  const EmitterArray& array() const { return array_; }
  const CouplingMatrices& couplings() const { return couplings_; }
  const Basis& basis() const { return basis_; }
  const Drive& drive() const { return drive_; }
  int dim() const { return basis_.dim(); }

  // out ← dρ/dt at time t. rho and out must both be dim×dim; out is
  // overwritten and may not alias rho.
  void rhs(double t, const Dense& rho, Dense& out, RhsWorkspace& ws) const;

  // K with the drive switched off: H₀ − (i/2)Σ_ij Γ_ij σ⁺_iσ⁻_j.
  const Csr& drive_free_kernel() const { return k0_; }
  // W = Σ_j (d_j σ⁺_j + h.c.); K(t) = drive_free_kernel + (Ω_p(t)/2)·W.
  const Csr& drive_term() const { return w_; }
  bool driven() const { return driven_; }
  const std::vector<JumpChannel>& jumps() const { return jumps_; }

 private:
  EmitterArray array_;
  CouplingMatrices couplings_;
  Basis basis_;
  Drive drive_;
  Csr k0_, w_;
  bool driven_ = false;
  std::vector<JumpChannel> jumps_;
};

// Single-shot evaluation matching the external contract: dρ/dt for a given
// Hamiltonian matrix and coupling set. Rebuilds the dissipator every call;
// use MasterEquation when evaluating repeatedly.
Dense lindblad_rhs(const DensityState& rho, const Csr& h,
                   const CouplingMatrices& couplings);

// ρ ← (ρ+ρ†)/2, in place, no allocation.
void hermitize(Dense& rho);

// ρ ← ρ/tr(ρ); returns the trace that was removed. Throws numeric_error when
// the trace is not strictly positive (the state has degenerated).
double trace_normalize(Dense& rho);

// (1/2)·Σ|λ_k(a−b)| for Hermitian a, b.
double trace_distance(const Dense& a, const Dense& b);

}  // namespace dipolesim
