#include <algorithm>
#include <cmath>

#include "dipolesim/simd.hpp"

namespace dipolesim {
namespace {

void zaxpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void zscale_scalar(std::size_t n, cplx a, cplx* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

cplx zdotc_scalar(std::size_t n, const cplx* x, const cplx* y) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double znorm2sq_scalar(std::size_t n, const cplx* x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

void rk_combine_scalar(std::size_t n, cplx* out, const cplx* base, int nterms,
                       const double* coeffs, const cplx* const* terms) {
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = base[i];
    for (int t = 0; t < nterms; ++t) acc += coeffs[t] * terms[t][i];
    out[i] = acc;
  }
}

double wrms_error_sq_scalar(std::size_t n, const cplx* err, const cplx* y0, const cplx* y1,
                            double atol, double rtol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double m = std::abs(err[i]) / scale;
    acc += m * m;
  }
  return acc;
}

void anti_herm_combine_scalar(std::size_t n, cplx* out, const cplx* p, const cplx* q) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx d = p[i] - q[i];
    out[i] = cplx(d.imag(), -d.real());
  }
}

}  // namespace

const SimdOps& simd_scalar_table() {
  static const SimdOps table{
      "scalar",          zaxpy_scalar,         zscale_scalar, zdotc_scalar,
      znorm2sq_scalar,   rk_combine_scalar,    wrms_error_sq_scalar,
      anti_herm_combine_scalar,
  };
  return table;
}

}  // namespace dipolesim
