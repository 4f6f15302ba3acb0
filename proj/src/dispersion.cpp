#include "dipolesim/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dipolesim/errors.hpp"

namespace dipolesim {
namespace {

constexpr double k_two_pi = 2.0 * M_PI;

double wrap_angle(double theta) {
  double t = std::fmod(theta, k_two_pi);
  if (t < 0.0) t += k_two_pi;
  return t;
}

// Σ_{j=J+1}^∞ j^{−p} by Euler–Maclaurin (z = 1 case; needs p ≥ 2).
double p_series_tail(int p, double jstart) {
  const double x = jstart + 1.0;
  double d1 = -p * std::pow(x, -p - 1);
  double d3 = -p * (p + 1) * (p + 2) * std::pow(x, -p - 3);
  return std::pow(x, 1.0 - p) / (p - 1.0) + 0.5 * std::pow(x, -p) - d1 / 12.0 +
         d3 / 720.0;
}

// Forward difference Δ^m g(x) for g = x^{−p}. For p = 1 the product form is
// exact; for p = 2, 3 a short difference triangle is used, which is only safe
// for small m (the caller keeps m ≤ 4 there).
double forward_difference(int p, double x, int m) {
  if (p == 1) {
    double prod = 1.0;
    for (int i = 1; i <= m; ++i) prod *= static_cast<double>(i) / (x + i);
    return prod / x;
  }
  std::vector<double> row(m + 1);
  for (int i = 0; i <= m; ++i) row[i] = std::pow(x + i, -p);
  for (int level = 0; level < m; ++level)
    for (int i = 0; i + level < m; ++i) row[i] -= row[i + 1];
  return row[0];
}

struct SeriesResult {
  cplx value;
  bool converged = false;
  double error = 0.0;
};

// Direct summation of Σ_{j=1}^{J} z^j/j^p plus a summation-by-parts tail:
// repeatedly applying Σ_{j>J} z^j g(j) = z^{J+1}g(J+1)/(1−z) − z/(1−z)·
// Σ_{j>J} z^j Δg(j) trades one power of j for a factor |z/(1−z)|.
SeriesResult try_polylog(int p, double theta, long trunc) {
  const cplx z = std::polar(1.0, theta);
  const double s = std::abs(1.0 - z);

  cplx sum(0.0, 0.0), comp(0.0, 0.0);  // Kahan compensation
  cplx zj(1.0, 0.0);
  for (long j = 1; j <= trunc; ++j) {
    zj = (j % 512 == 1) ? std::polar(1.0, theta * j) : zj * z;
    const cplx term = zj / std::pow(static_cast<double>(j), p);
    const cplx t = sum + (term - comp);
    comp = (t - sum) - (term - comp);
    sum = t;
  }

  const cplx ratio = -z / (1.0 - z);
  const int max_order = p == 1 ? 14 : 4;
  cplx factor = std::polar(1.0, theta * (trunc + 1)) / (1.0 - z);
  double last = 1e300;
  SeriesResult res;
  for (int m = 0; m <= max_order; ++m) {
    const double diff = forward_difference(p, static_cast<double>(trunc + 1), m);
    const cplx term = factor * diff;
    const double mag = std::abs(term);
    if (mag > last) break;  // asymptotic regime ended; stop at smallest term
    sum += term;
    last = mag;
    factor *= ratio;
    // Roundoff floor of the next difference triangle entry, amplified by the
    // accumulated 1/(1−z) powers.
    const double floor_est =
        p == 1 ? 0.0
               : std::abs(factor) * std::pow(2.0, m + 1) * 1e-16 *
                     std::pow(static_cast<double>(trunc + 1), -p);
    res.error = mag + floor_est;
    if (res.error < 1e-13) break;
  }
  res.value = sum;
  res.converged = true;
  return res;
}

// Σ_{j=1}^∞ e^{iθj}/j^p with adaptive truncation (doubling up to j_max).
cplx polylog_series(int p, double theta, long j_max, double tol) {
  theta = wrap_angle(theta);
  if (theta < 1e-12 || k_two_pi - theta < 1e-12) {
    if (p == 1)
      throw convergence_failure_error(
          "lattice sum diverges at the light line (phase θ = 0)");
    long j0 = 1000;
    double sum = 0.0;
    for (long j = 1; j <= j0; ++j) sum += std::pow(static_cast<double>(j), -p);
    return sum + p_series_tail(p, static_cast<double>(j0));
  }

  const double s = 2.0 * std::sin(0.5 * theta);
  long trunc = std::min<long>(j_max, std::max<long>(64, std::lround(100.0 / s)));
  SeriesResult res;
  while (true) {
    res = try_polylog(p, theta, trunc);
    if (res.converged && res.error < tol) return res.value;
    if (trunc >= j_max)
      throw convergence_failure_error(
          "lattice sum did not reach tolerance " + std::to_string(tol) +
          " within " + std::to_string(j_max) +
          " terms (estimated error " + std::to_string(res.error) +
          "); the phase is too close to the light line");
    trunc = std::min(j_max, trunc * 4);
  }
}

}  // namespace

cplx chain_dispersion(double k, double d, const Vec3& orientation, long j_max,
                      double tol) {
  if (d <= 0.0) throw invalid_argument_error("lattice constant must be positive");
  if (j_max < 64) throw invalid_argument_error("j_max must be at least 64");
  const double k_edge = M_PI / d;
  if (k < -1e-12 || k > k_edge * (1.0 + 1e-12))
    throw invalid_argument_error("quasi-momentum outside [0, π/d]");
  const double norm = orientation.norm();
  if (norm < 1e-12) throw invalid_argument_error("dipole orientation is zero");

  const double k0 = k_two_pi;
  const double a = k0 * d;
  const double cos_axis = orientation.y / norm;
  const double w_l = cos_axis * cos_axis;
  const double w_t = 1.0 - w_l;

  const double theta_p = wrap_angle((k0 + k) * d);
  const double theta_m = wrap_angle((k0 - k) * d);

  cplx s1(0.0, 0.0);
  if (w_t > 1e-15)
    s1 = polylog_series(1, theta_p, j_max, tol) +
         polylog_series(1, theta_m, j_max, tol);
  const cplx s2 = polylog_series(2, theta_p, j_max, tol) +
                  polylog_series(2, theta_m, j_max, tol);
  const cplx s3 = polylog_series(3, theta_p, j_max, tol) +
                  polylog_series(3, theta_m, j_max, tol);

  const cplx bracket = w_t / a * s1 +
                       cplx(0.0, (w_t - 2.0 * w_l)) / (a * a) * s2 +
                       (2.0 * w_l - w_t) / (a * a * a) * s3;
  return -0.75 * bracket + cplx(0.0, -0.5);
}

QuasiMomentum assign_quasi_momentum(const Eigen::VectorXcd& mode, double d) {
  const int n = static_cast<int>(mode.size());
  if (n < 1) throw invalid_argument_error("empty mode vector");
  if (d <= 0.0) throw invalid_argument_error("lattice constant must be positive");
  const double mode_norm = mode.norm();
  if (mode_norm < 1e-300) throw invalid_argument_error("zero mode vector");

  QuasiMomentum best;
  for (int m = 1; m <= n; ++m) {
    cplx acc(0.0, 0.0);
    double ansatz_sq = 0.0;
    for (int j = 0; j < n; ++j) {
      const double amp = std::sin(M_PI * m * (j + 1.0) / (n + 1.0));
      acc += amp * mode[j];
      ansatz_sq += amp * amp;
    }
    const double overlap = std::abs(acc) / (std::sqrt(ansatz_sq) * mode_norm);
    if (overlap > best.overlap) {
      best.overlap = overlap;
      best.k = M_PI * m / ((n + 1.0) * d);
    }
  }
  return best;
}

}  // namespace dipolesim
