#pragma once

#include <Eigen/Dense>
#include <complex>

namespace dipolesim {

// Column-major dense complex matrix; the layout every dense kernel assumes.
using Dense = Eigen::MatrixXcd;

}  // namespace dipolesim
