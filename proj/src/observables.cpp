#include "dipolesim/observables.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "dipolesim/errors.hpp"
#include "dipolesim/greens.hpp"
#include "dipolesim/operators.hpp"
#include "dipolesim/parallel.hpp"

namespace dipolesim {
namespace {

double checked_real(cplx value, const char* what) {
  if (std::abs(value.imag()) > 1e-10 * std::max(1.0, std::abs(value.real())))
    throw numeric_error(std::string(what) + " has imaginary residue " +
                        std::to_string(value.imag()) +
                        "; correlation input is not Hermitian");
  return value.real();
}

// Gram matrix M_il = c_i* · c_l of the detection coefficients.
Dense gram(const FieldCoefficients& coeffs) {
  const int n = coeffs.size();
  Dense m(n, n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) m(i, l) = coeffs.c[i].cdot(coeffs.c[l]);
  return m;
}

double contracted_intensity(const Dense& m, const Dense& t) {
  cplx acc(0.0, 0.0);
  for (int l = 0; l < m.cols(); ++l)
    for (int i = 0; i < m.rows(); ++i) acc += m(i, l) * t(i, l);
  const double value = checked_real(acc, "intensity");
  if (value < -1e-12)
    throw numeric_error("intensity " + std::to_string(value) + " is negative");
  return std::max(value, 0.0);
}

// Σ_{i≠j,k≠l} M_il M_jk ⟨σ⁺_iσ⁺_jσ⁻_kσ⁻_l⟩ for a basis truncated at two
// excitations: the four-operator string is |{i,j}⟩⟨{k,l}|, so the sum runs
// over ordered pairs of doubly-excited basis states.
double g2_numerator_pairs(const DensityState& state, const Dense& m) {
  const Basis& basis = state.basis;
  if (basis.n_max < 2) return 0.0;
  const int lo = basis.manifold_offset[2];
  const int hi = basis.manifold_offset[3];
  cplx acc(0.0, 0.0);
  for (int q = lo; q < hi; ++q) {
    const std::uint32_t sq = basis.states[q];
    const int k = std::countr_zero(sq);
    const int l = std::countr_zero(sq & (sq - 1));
    for (int p = lo; p < hi; ++p) {
      const std::uint32_t sp = basis.states[p];
      const int i = std::countr_zero(sp);
      const int j = std::countr_zero(sp & (sp - 1));
      const cplx s = m(i, k) * m(j, l) + m(i, l) * m(j, k);
      acc += state.rho(q, p) * s;
    }
  }
  return std::max(checked_real(2.0 * acc, "g2 numerator"), 0.0);
}

// General route, valid for any truncation: with A_α = Σ_j c_jα σ⁻_j,
// numerator = Σ_β Tr(σ̃ A_β†A_β) for σ̃ = Σ_α A_α ρ A_α†.
double g2_numerator_general(const DensityState& state,
                            const std::vector<std::vector<cplx>>& weights) {
  const Basis& basis = state.basis;
  const int d = basis.dim();
  Dense sigma = Dense::Zero(d, d);
  Dense tmp(d, d);
  std::vector<Csr> ops;
  ops.reserve(weights.size());
  for (const auto& w : weights) ops.push_back(weighted_lowering_sum(basis, w));
  for (const Csr& a : ops) {
    tmp.setZero();
    a.axpy_left(1.0, state.rho, tmp);
    a.axpy_right_adjoint(1.0, tmp, sigma);
  }
  cplx acc(0.0, 0.0);
  Dense prod = Dense::Zero(d, d);
  for (const Csr& a : ops) {
    tmp.setZero();
    a.axpy_left(1.0, sigma, tmp);
    prod.setZero();
    a.axpy_right_adjoint(1.0, tmp, prod);
    acc += prod.trace();
  }
  return std::max(checked_real(acc, "g2 numerator"), 0.0);
}

double g2_from_coefficients(const DensityState& state, const Dense& m,
                            const std::vector<std::vector<cplx>>& weights,
                            const Dense& t) {
  const double denom = contracted_intensity(m, t);
  if (denom < 1e-30)
    throw undefined_correlation_error(
        "g2 undefined: intensity " + std::to_string(denom) +
        " is below the 1e-30 floor (dark direction)");
  const double num = state.basis.n_max <= 2 ? g2_numerator_pairs(state, m)
                                            : g2_numerator_general(state, weights);
  return num / (denom * denom);
}

std::vector<std::vector<cplx>> cartesian_weights(const FieldCoefficients& coeffs) {
  std::vector<std::vector<cplx>> w(3, std::vector<cplx>(coeffs.size()));
  for (int j = 0; j < coeffs.size(); ++j)
    for (int axis = 0; axis < 3; ++axis) w[axis][j] = coeffs.c[j][axis];
  return w;
}

Vec3 plane_direction(double phi) { return {std::sin(phi), -std::cos(phi), 0.0}; }

void check_detector(double delta_phi, double r_far, int n_quad) {
  if (delta_phi <= 0.0) throw invalid_argument_error("delta_phi must be positive");
  if (r_far <= 0.0) throw invalid_argument_error("r_far must be positive");
  if (n_quad < 5 || n_quad % 2 == 0)
    throw invalid_argument_error("n_quad must be odd and at least 5");
}

double simpson_j_phi(const DensityState& state, const EmitterArray& array,
                     const Dense& t, double phi, double delta_phi, double r_far,
                     int n_quad) {
  const double h = 2.0 * delta_phi / (n_quad - 1);
  double integral = 0.0;
  for (int i = 0; i < n_quad; ++i) {
    const double node = phi - delta_phi + i * h;
    const FieldCoefficients coeffs =
        far_field_coefficients(array, plane_direction(node) * r_far);
    const double weight =
        (i == 0 || i == n_quad - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    integral += weight * contracted_intensity(gram(coeffs), t);
  }
  integral *= h / 3.0;
  const double solid_angle = 4.0 * delta_phi * delta_phi;  // (2Δφ)²
  return solid_angle / delta_phi * integral;
}

}  // namespace

FieldCoefficients field_coefficients(const EmitterArray& array, const Vec3& r) {
  FieldCoefficients out;
  out.c.reserve(array.size());
  const double k0 = array.k0();
  for (int j = 0; j < array.size(); ++j) {
    const Eigen::Matrix3cd& g = greens_tensor(r - array.positions[j], k0).value;
    const CVec3 mu(array.orientations[j]);
    out.c.push_back({g(0, 0) * mu.x + g(0, 1) * mu.y + g(0, 2) * mu.z,
                     g(1, 0) * mu.x + g(1, 1) * mu.y + g(1, 2) * mu.z,
                     g(2, 0) * mu.x + g(2, 1) * mu.y + g(2, 2) * mu.z});
  }
  return out;
}

FieldCoefficients far_field_coefficients(const EmitterArray& array, const Vec3& r) {
  const double radius = r.norm();
  if (radius <= 0.0)
    throw singular_input_error("far-field direction undefined at the origin");
  const Vec3 rhat = r * (1.0 / radius);
  const double k0 = array.k0();
  const cplx front = std::exp(cplx(0.0, k0 * radius)) / (4.0 * M_PI * radius);

  FieldCoefficients out;
  out.c.reserve(array.size());
  for (int j = 0; j < array.size(); ++j) {
    const Vec3& mu = array.orientations[j];
    const Vec3 transverse = mu - rhat * rhat.dot(mu);
    const cplx phase = front * std::exp(cplx(0.0, -k0 * rhat.dot(array.positions[j])));
    out.c.push_back(CVec3(transverse) * phase);
  }
  return out;
}

Dense pair_correlations(const DensityState& state) {
  const Basis& basis = state.basis;
  const int n = basis.n_emitters;
  Dense t = Dense::Zero(n, n);
  for (int sidx = 0; sidx < basis.dim(); ++sidx) {
    const std::uint32_t s = basis.states[sidx];
    for (std::uint32_t rem = s; rem != 0; rem &= rem - 1) {
      const int l = std::countr_zero(rem);
      const std::uint32_t lowered = s ^ (1u << l);
      for (int i = 0; i < n; ++i) {
        const std::uint32_t bit = 1u << i;
        if ((lowered & bit) != 0) continue;  // σ⁺_i on an excited emitter
        t(i, l) += state.rho(sidx, basis.index_of(lowered | bit));
      }
    }
  }
  return t;
}

double intensity(const DensityState& state, const FieldCoefficients& coeffs) {
  if (coeffs.size() != state.basis.n_emitters)
    throw invalid_argument_error("coefficient count does not match emitter count");
  return contracted_intensity(gram(coeffs), pair_correlations(state));
}

double g2_zero(const DensityState& state, const FieldCoefficients& coeffs) {
  if (coeffs.size() != state.basis.n_emitters)
    throw invalid_argument_error("coefficient count does not match emitter count");
  return g2_from_coefficients(state, gram(coeffs), cartesian_weights(coeffs),
                              pair_correlations(state));
}

double g2_zero_filtered(const DensityState& state, const FieldCoefficients& coeffs,
                        const CVec3& axis) {
  if (coeffs.size() != state.basis.n_emitters)
    throw invalid_argument_error("coefficient count does not match emitter count");
  if (std::abs(std::sqrt(axis.squared_norm()) - 1.0) > 1e-9)
    throw invalid_argument_error("polarization filter axis must be a unit vector");
  const int n = coeffs.size();
  std::vector<std::vector<cplx>> weights(1, std::vector<cplx>(n));
  for (int j = 0; j < n; ++j) weights[0][j] = axis.cdot(coeffs.c[j]);
  Dense m(n, n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) m(i, l) = std::conj(weights[0][i]) * weights[0][l];
  return g2_from_coefficients(state, m, weights, pair_correlations(state));
}

double directional_intensity(const DensityState& state, const EmitterArray& array,
                             double phi, double delta_phi, double r_far,
                             int n_quad) {
  check_detector(delta_phi, r_far, n_quad);
  return simpson_j_phi(state, array, pair_correlations(state), phi, delta_phi,
                       r_far, n_quad);
}

double total_emission_rate(const DensityState& state,
                           const CouplingMatrices& couplings) {
  if (couplings.gamma.rows() != state.basis.n_emitters)
    throw invalid_argument_error("coupling size does not match emitter count");
  const Dense t = pair_correlations(state);
  cplx acc(0.0, 0.0);
  for (int l = 0; l < t.cols(); ++l)
    for (int i = 0; i < t.rows(); ++i) acc += couplings.gamma(i, l) * t(i, l);
  const double rate = checked_real(acc, "emission rate");
  if (rate < -1e-12)
    throw numeric_error("emission rate " + std::to_string(rate) + " is negative");
  return std::max(rate, 0.0);
}

double excited_population(const DensityState& state) {
  double acc = 0.0;
  for (int sidx = 0; sidx < state.basis.dim(); ++sidx)
    acc += std::popcount(state.basis.states[sidx]) * state.rho(sidx, sidx).real();
  return acc;
}

std::vector<double> manifold_populations(const DensityState& state) {
  const Basis& basis = state.basis;
  std::vector<double> p(basis.n_max + 1, 0.0);
  for (int n = 0; n <= basis.n_max; ++n)
    for (int s = basis.manifold_offset[n]; s < basis.manifold_offset[n + 1]; ++s)
      p[n] += state.rho(s, s).real();
  return p;
}

AngularScan angular_scan(const DensityState& state, const EmitterArray& array,
                         const std::vector<double>& phi_grid,
                         const DetectorParams& detector, int threads) {
  if (phi_grid.empty()) throw invalid_argument_error("empty detector grid");
  check_detector(detector.delta_phi, detector.r_far, detector.n_quad);
  const Dense t = pair_correlations(state);

  AngularScan scan;
  scan.points.resize(phi_grid.size());
  parallel_for(
      phi_grid.size(),
      [&](std::size_t idx) {
        AngularPoint& point = scan.points[idx];
        point.phi = phi_grid[idx];
        try {
          point.j_phi = simpson_j_phi(state, array, t, point.phi,
                                      detector.delta_phi, detector.r_far,
                                      detector.n_quad);
          const FieldCoefficients coeffs = far_field_coefficients(
              array, plane_direction(point.phi) * detector.r_far);
          point.g2 = detector.filtered
                         ? g2_zero_filtered(state, coeffs, detector.filter_axis)
                         : g2_from_coefficients(state, gram(coeffs),
                                                cartesian_weights(coeffs), t);
          point.ok = true;
        } catch (const error& e) {
          point.error = e.what();
        }
      },
      threads);

  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    if (!scan.points[i].ok) continue;
    if (scan.argmax < 0 || scan.points[i].j_phi > scan.j_max) {
      scan.argmax = static_cast<int>(i);
      scan.j_max = scan.points[i].j_phi;
    }
  }
  return scan;
}

}  // namespace dipolesim
