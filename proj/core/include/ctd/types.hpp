#pragma once

#include <Eigen/Dense>

namespace ctd {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Gradients of vector fields use the row-by-derivative layout
// (grad u)(i, j) = d_i u_j, so (phi . grad) u = grad(u)^T phi.

inline Mat3 sym(const Mat3& a) { return 0.5 * (a + a.transpose()); }

inline double frob(const Mat3& a) { return a.norm(); }

inline Mat3 outer(const Vec3& a, const Vec3& b) { return a * b.transpose(); }

// Matrix of u -> a x u acting on row vectors, i.e. grad(a x x).
inline Mat3 rotation_gradient(const Vec3& a)
{
  Mat3 m;
  m << 0.0, a(2), -a(1),
      -a(2), 0.0, a(0),
       a(1), -a(0), 0.0;
  return m;
}

inline Vec3 curl_from_gradient(const Mat3& g)
{
  return Vec3(g(1, 2) - g(2, 1), g(2, 0) - g(0, 2), g(0, 1) - g(1, 0));
}

} // namespace ctd
