#include <cstdlib>
#include <cstring>

#include "dipolesim/simd.hpp"

namespace dipolesim {

#if defined(DIPOLESIM_HAVE_AVX2)
const SimdOps* simd_avx2_impl_table();  // defined in simd_avx2.cpp
#endif

const SimdOps* simd_avx2_table() {
#if defined(DIPOLESIM_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return simd_avx2_impl_table();
#endif
  return nullptr;
}

namespace {

const SimdOps& pick_table() {
  const char* env = std::getenv("DIPOLESIM_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return simd_scalar_table();
  if (env && std::strcmp(env, "avx2") == 0) {
    if (const SimdOps* t = simd_avx2_table()) return *t;
    return simd_scalar_table();  // requested ISA unavailable: degrade quietly
  }
  if (const SimdOps* t = simd_avx2_table()) return *t;
  return simd_scalar_table();
}

}  // namespace

const SimdOps& simd() {
  static const SimdOps& active = pick_table();
  return active;
}

}  // namespace dipolesim
