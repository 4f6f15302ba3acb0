#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace dipolesim {

using cplx = std::complex<double>;

// Minimal fixed-size 3-vectors. Real for positions/orientations, complex for
// polarizations and field amplitudes. Kept deliberately small; anything
// matrix-shaped goes through Eigen.
struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    const double n = norm();
    return {x / n, y / n, z / n};
  }
  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

struct CVec3 {
  cplx x{0.0, 0.0}, y{0.0, 0.0}, z{0.0, 0.0};

  CVec3() = default;
  CVec3(cplx x_, cplx y_, cplx z_) : x(x_), y(y_), z(z_) {}
  explicit CVec3(const Vec3& v) : x(v.x), y(v.y), z(v.z) {}

  CVec3 operator+(const CVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  CVec3 operator-(const CVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  CVec3 operator*(cplx s) const { return {x * s, y * s, z * s}; }

  // Hermitian inner product, conjugation on *this.
  cplx cdot(const CVec3& o) const {
    return std::conj(x) * o.x + std::conj(y) * o.y + std::conj(z) * o.z;
  }
  // Bilinear (no conjugation) contraction, used for  μ̂·G·μ̂  style products.
  cplx bdot(const CVec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double squared_norm() const { return std::real(cdot(*this)); }
  cplx operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline CVec3 operator*(cplx s, const CVec3& v) { return v * s; }

}  // namespace dipolesim
