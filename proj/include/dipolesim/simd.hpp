#pragma once

#include <cstddef>

#include "dipolesim/vec3.hpp"

namespace dipolesim {

// Hot dense kernels on contiguous complex<double> arrays. A scalar reference
// implementation always exists; an AVX2/FMA variant is selected at runtime
// when the CPU supports it. The active table can be forced with
// DIPOLESIM_SIMD=scalar|avx2|auto (auto = probe the CPU).
//
// Contracts:
//  - arrays do not alias unless stated otherwise,
//  - rk_combine allows out == base (base is read before the write),
//  - wrms_error_sq returns the *sum* of squared weighted magnitudes; callers
//    divide by n and take the square root.
struct SimdOps {
  const char* name;

  // y += a * x
  void (*zaxpy)(std::size_t n, cplx a, const cplx* x, cplx* y);
  // x *= a
  void (*zscale)(std::size_t n, cplx a, cplx* x);
  // sum_i conj(x_i) * y_i
  cplx (*zdotc)(std::size_t n, const cplx* x, const cplx* y);
  // sum_i |x_i|^2
  double (*znorm2sq)(std::size_t n, const cplx* x);
  // out = base + sum_t coeffs[t] * terms[t]   (real coefficients)
  void (*rk_combine)(std::size_t n, cplx* out, const cplx* base, int nterms,
                     const double* coeffs, const cplx* const* terms);
  // sum_i ( |err_i| / (atol + rtol * max(|y0_i|, |y1_i|)) )^2
  double (*wrms_error_sq)(std::size_t n, const cplx* err, const cplx* y0, const cplx* y1,
                          double atol, double rtol);
  // out = -i * (p - q)
  void (*anti_herm_combine)(std::size_t n, cplx* out, const cplx* p, const cplx* q);
};

// Active table (dispatch decided once, thread-safe).
const SimdOps& simd();

// Reference table, always scalar; used by equivalence tests.
const SimdOps& simd_scalar_table();

// AVX2 table or nullptr when not compiled in / not supported by this CPU.
const SimdOps* simd_avx2_table();

}  // namespace dipolesim
