#include "dipolesim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dipolesim/errors.hpp"
#include "dipolesim/rng.hpp"

namespace dipolesim {

namespace {

constexpr double kMinSeparation = 1e-9;  // λ₀ units

Vec3 require_unit(const Vec3& v, const char* what) {
  const double n = v.norm();
  if (n < 1e-12)
    throw invalid_argument_error(std::string(what) + " must be a nonzero vector");
  return v / n;
}

double min_pair_distance(const std::vector<Vec3>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::min(best, (pts[i] - pts[j]).norm());
  return best;
}

Vec3 rotate_about_y(const Vec3& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x + s * v.z, v.y, -s * v.x + c * v.z};
}

}  // namespace

bool EmitterArray::is_driven(int j) const {
  if (driven.empty()) return true;
  return std::find(driven.begin(), driven.end(), j) != driven.end();
}

void validate_array(const EmitterArray& array) {
  if (array.size() < 1) throw invalid_argument_error("emitter array must contain at least one emitter");
  if (array.orientations.size() != array.positions.size())
    throw invalid_argument_error("orientations/positions length mismatch");
  for (const Vec3& mu : array.orientations)
    if (std::abs(mu.norm() - 1.0) > 1e-12)
      throw invalid_argument_error("dipole orientation is not normalized");
  if (array.size() > 1 && min_pair_distance(array.positions) <= kMinSeparation)
    throw invalid_argument_error("emitter positions are not pairwise distinct");
  if (array.gamma0 <= 0.0 || array.lambda0 <= 0.0)
    throw invalid_argument_error("gamma0 and lambda0 must be positive");
}

EmitterArray make_chain(int n, double d, const Vec3& axis, const Vec3& orientation,
                        bool centered) {
  if (n < 1) throw invalid_argument_error("chain needs n >= 1");
  if (d <= 0.0) throw invalid_argument_error("chain spacing must be positive");
  const Vec3 a = require_unit(axis, "chain axis");
  const Vec3 mu = require_unit(orientation, "dipole orientation");
  EmitterArray arr;
  arr.positions.reserve(n);
  for (int j = 0; j < n; ++j) arr.positions.push_back(a * (d * j));
  if (centered) {
    const Vec3 shift = a * (d * (n - 1) / 2.0);
    for (Vec3& p : arr.positions) p = p - shift;
  }
  arr.orientations.assign(n, mu);
  validate_array(arr);
  return arr;
}

EmitterArray make_ring(int n, double d, const Vec3& normal, const Vec3& orientation) {
  if (n < 2) throw invalid_argument_error("ring needs n >= 2");
  if (d <= 0.0) throw invalid_argument_error("ring spacing must be positive");
  const Vec3 nh = require_unit(normal, "ring normal");
  const Vec3 mu = require_unit(orientation, "dipole orientation");
  const double radius = d / (2.0 * std::sin(M_PI / n));
  // In-plane frame: canonical (x̂, ŷ) when the normal is (anti)parallel to ẑ.
  Vec3 u, v;
  if (std::abs(nh.z) > 0.9) {
    u = Vec3(1, 0, 0);
    v = nh.cross(u).normalized();
  } else {
    u = Vec3(0, 0, 1).cross(nh).normalized();
    v = nh.cross(u);
  }
  EmitterArray arr;
  arr.positions.reserve(n);
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * M_PI * j / n;
    arr.positions.push_back(u * (radius * std::cos(phi)) + v * (radius * std::sin(phi)));
  }
  arr.orientations.assign(n, mu);
  validate_array(arr);
  return arr;
}

EmitterArray make_ring_pair(int n_driven, int n_undriven, double d,
                            double center_separation, double tilt_angle,
                            double orientation_tilt_x) {
  EmitterArray driven_ring = make_ring(n_driven, d, Vec3(0, 0, 1), Vec3(0, 0, 1));
  if (orientation_tilt_x != 0.0) {
    const Vec3 mu = Vec3(orientation_tilt_x, 0, 1).normalized();
    driven_ring.orientations.assign(n_driven, mu);
  }

  // The tilt rotates the second ring's plane only; its dipoles stay z-polarized
  // (which is what decouples them from an in-plane circularly polarized drive).
  EmitterArray undriven_ring = make_ring(n_undriven, d, Vec3(0, 0, 1), Vec3(0, 0, 1));
  const Vec3 center(center_separation, 0, 0);
  for (Vec3& p : undriven_ring.positions) p = rotate_about_y(p, tilt_angle) + center;

  EmitterArray arr;
  arr.positions = driven_ring.positions;
  arr.positions.insert(arr.positions.end(), undriven_ring.positions.begin(),
                       undriven_ring.positions.end());
  arr.orientations = driven_ring.orientations;
  arr.orientations.insert(arr.orientations.end(), undriven_ring.orientations.begin(),
                          undriven_ring.orientations.end());
  arr.driven.resize(n_driven);
  for (int j = 0; j < n_driven; ++j) arr.driven[j] = j;
  if (min_pair_distance(arr.positions) <= kMinSeparation)
    throw invalid_argument_error("ring pair geometry produces overlapping emitters");
  validate_array(arr);
  return arr;
}

EmitterArray apply_disorder(const EmitterArray& array, double epsilon, double d,
                            std::uint64_t seed) {
  if (epsilon < 0.0) throw invalid_argument_error("disorder fraction must be >= 0");
  validate_array(array);
  if (epsilon == 0.0) return array;

  const double amp = d * epsilon;
  constexpr int kMaxRetries = 64;
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    EmitterArray out = array;
    for (Vec3& p : out.positions) {
      p.x += rng.uniform_symmetric(amp);
      p.y += rng.uniform_symmetric(amp);
    }
    if (out.size() == 1 || min_pair_distance(out.positions) > kMinSeparation) return out;
  }
  throw invalid_argument_error(
      "disorder displacement kept producing coincident emitters (retry budget exhausted)");
}

}  // namespace dipolesim
