#pragma once

#include <string>
#include <vector>

#include "dipolesim/basis.hpp"
#include "dipolesim/couplings.hpp"
#include "dipolesim/geometry.hpp"
#include "dipolesim/vec3.hpp"

namespace dipolesim {

// Per-emitter complex field amplitudes: the positive-frequency field at r is
// E⁺(r) = Σ_j c_j(r) σ⁻_j in Green-units (prefactor μ₀ω₀²|μ| ≡ 1).
struct FieldCoefficients {
  std::vector<CVec3> c;
  int size() const { return static_cast<int>(c.size()); }
};

// Exact dyadic coefficients c_j = G(r − r_j)·μ̂_j. Valid at any r away from
// the emitters (singular_input_error otherwise).
FieldCoefficients field_coefficients(const EmitterArray& array, const Vec3& r);

// Leading far-field asymptotics with exact relative phases:
// c_j = e^{ik₀R}/(4πR) e^{−ik₀ r̂·r_j} (μ̂_j − r̂(r̂·μ̂_j)), R = |r|. Detector
// quantities use these so that correlation ratios are strictly r-independent
// (near-field 1/R², 1/R³ corrections drop instead of polluting g² at the
// 1e-3 level for R = 100λ₀).
FieldCoefficients far_field_coefficients(const EmitterArray& array, const Vec3& r);

// T_il = ⟨σ⁺_i σ⁻_l⟩ (N×N, Hermitian).
Dense pair_correlations(const DensityState& state);

// I(r) = Σ_il (c_i*·c_l) ⟨σ⁺_iσ⁻_l⟩, real and non-negative.
double intensity(const DensityState& state, const FieldCoefficients& coeffs);

// Zero-delay second-order correlation of the total (polarization-summed)
// detected field: Σ_αβ⟨E⁻_αE⁻_βE⁺_βE⁺_α⟩ / (Σ_α⟨E⁻_αE⁺_α⟩)². Throws
// undefined_correlation_error when the intensity is below 1e-30 (dark
// direction). The n_max = 2 truncation admits a closed pair-sum form; larger
// truncations fall back to the general operator route.
double g2_zero(const DensityState& state, const FieldCoefficients& coeffs);

// Same with detection filtered through polarization ê (complex unit vector):
// the field is projected on ê before correlating.
double g2_zero_filtered(const DensityState& state, const FieldCoefficients& coeffs,
                        const CVec3& axis);

// 𝒥(φ) = (ΔΩ/Δφ) ∫_{φ−Δφ}^{φ+Δφ} I(r_far·r̂(φ′)) dφ′ with r̂(φ) =
// (sin φ, −cos φ, 0) and ΔΩ = (2Δφ)² (square detector). Composite Simpson
// quadrature over n_quad nodes (odd, ≥ 5).
double directional_intensity(const DensityState& state, const EmitterArray& array,
                             double phi, double delta_phi, double r_far,
                             int n_quad);

// Γ_out = Σ_il Γ_il ⟨σ⁺_iσ⁻_l⟩ in Γ₀ units.
double total_emission_rate(const DensityState& state,
                           const CouplingMatrices& couplings);

// ⟨n_ex⟩ = Σ_j ⟨σ⁺_jσ⁻_j⟩ ∈ [0, N].
double excited_population(const DensityState& state);

// p_n = Tr(P_n ρ) over excitation number n = 0..n_max.
std::vector<double> manifold_populations(const DensityState& state);

struct DetectorParams {
  double delta_phi = 0.01 * M_PI;
  double r_far = 100.0;
  int n_quad = 9;
  bool filtered = false;  // polarization-filtered g² (axis below)
  CVec3 filter_axis{0.0, 0.0, 1.0};
};

struct AngularPoint {
  double phi = 0.0;
  double j_phi = 0.0;
  double g2 = 0.0;
  bool ok = false;
  std::string error;  // set when this grid point failed
};

struct AngularScan {
  std::vector<AngularPoint> points;
  int argmax = -1;      // index of the largest 𝒥 among ok points
  double j_max = 0.0;   // 𝒥 at argmax
};

// 𝒥 and g² over a φ grid in the xy-plane; grid points run in parallel and
// per-point failures are recorded without aborting the scan. threads = 0
// defers to DIPOLESIM_THREADS / hardware.
AngularScan angular_scan(const DensityState& state, const EmitterArray& array,
                         const std::vector<double>& phi_grid,
                         const DetectorParams& detector, int threads = 0);

}  // namespace dipolesim
