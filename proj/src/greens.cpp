#include "dipolesim/greens.hpp"

#include <cmath>

#include "dipolesim/errors.hpp"

namespace dipolesim {

GreensTensor greens_tensor(const Vec3& r, double k0) {
  const double dist = r.norm();
  if (dist <= 0.0)
    throw singular_input_error("dyadic propagator evaluated at zero separation");
  const double u = k0 * dist;
  const Vec3 rh = r / dist;
  const cplx pref = std::exp(cplx(0.0, u)) / (4.0 * M_PI * dist);
  const cplx near = cplx(1.0 / (u * u), -1.0 / u);

  Eigen::Matrix3d rr;
  rr << rh.x * rh.x, rh.x * rh.y, rh.x * rh.z,
        rh.y * rh.x, rh.y * rh.y, rh.y * rh.z,
        rh.z * rh.x, rh.z * rh.y, rh.z * rh.z;
  const Eigen::Matrix3d eye = Eigen::Matrix3d::Identity();

  GreensTensor g;
  g.value = pref * ((eye - rr).cast<cplx>() + near * (3.0 * rr - eye).cast<cplx>());
  return g;
}

cplx mu_g_mu(const Vec3& r, const Vec3& mu_i, const Vec3& mu_j, double k0) {
  const double dist = r.norm();
  if (dist <= 0.0)
    throw singular_input_error("dyadic propagator evaluated at zero separation");
  const double u = k0 * dist;
  const Vec3 rh = r / dist;
  const cplx pref = std::exp(cplx(0.0, u)) / (4.0 * M_PI * dist);
  const cplx near = cplx(1.0 / (u * u), -1.0 / u);
  const double mm = mu_i.dot(mu_j);
  const double ri = rh.dot(mu_i);
  const double rj = rh.dot(mu_j);
  return pref * ((mm - ri * rj) + near * (3.0 * ri * rj - mm));
}

}  // namespace dipolesim
