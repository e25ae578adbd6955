#include "ctd/errors.hpp"
#include "ctd/thin_domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ctd {

ClosestPointMap::ClosestPointMap(std::shared_ptr<const Surface> surface)
    : surface_(std::move(surface))
{
  if (surface_->kind() == SurfaceKind::Sphere || surface_->kind() == SurfaceKind::Torus)
    return;
  const int n1 = 24, n2 = 48;
  for (int c = 0; c < static_cast<int>(surface_->charts().size()); ++c) {
    const Chart& ch = surface_->charts()[c];
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        const double a = ch.periodic[0] ? ch.lo(0) + (ch.hi(0) - ch.lo(0)) * i / n1
                                        : ch.lo(0) + (ch.hi(0) - ch.lo(0)) * (i + 0.5) / n1;
        const double b = ch.periodic[1] ? ch.lo(1) + (ch.hi(1) - ch.lo(1)) * j / n2
                                        : ch.lo(1) + (ch.hi(1) - ch.lo(1)) * (j + 0.5) / n2;
        const Vec2 s(a, b);
        seeds_.emplace_back(c, s);
        seed_points_.push_back(ch.jet(s).x);
      }
  }
}

ClosestPoint ClosestPointMap::project(const Vec3& x) const
{
  if (!x.allFinite())
    throw Error(ErrorCode::NonFiniteInput, "point is not finite");
  ClosestPoint out;
  if (surface_->kind() == SurfaceKind::Sphere) {
    const double r = x.norm();
    if (r == 0.0)
      throw Error(ErrorCode::OutOfTube, "origin has no closest point on the sphere");
    out.y = x / r;
    out.d = r - 1.0;
    out.s = Vec2(std::acos(std::clamp(out.y(2), -1.0, 1.0)), std::atan2(out.y(1), out.y(0)));
    out.s = surface_->wrap(0, out.s);
    return out;
  }
  if (surface_->kind() == SurfaceKind::Torus) {
    const double R = surface_->params()[0], a = surface_->params()[1];
    const double rho = std::hypot(x(0), x(1));
    const double v = std::atan2(x(1), x(0));
    const double u = std::atan2(x(2), rho - R);
    out.s = surface_->wrap(0, Vec2(u, v));
    out.d = std::hypot(rho - R, x(2)) - a;
    const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
    out.y = Vec3((R + a * cu) * cv, (R + a * cu) * sv, a * su);
    return out;
  }
  return newton(x);
}

ClosestPoint ClosestPointMap::newton(const Vec3& x) const
{
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < seed_points_.size(); ++k) {
    const double d = (seed_points_[k] - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  const int c = seeds_[best].first;
  const Chart& ch = surface_->charts()[c];
  Vec2 s = seeds_[best].second;
  auto clamp = [&](Vec2 v) {
    for (int k = 0; k < 2; ++k)
      if (!ch.periodic[k])
        v(k) = std::clamp(v(k), ch.lo(k) + 1e-10, ch.hi(k) - 1e-10);
    return surface_->wrap(c, v);
  };

  int it = 0;
  ChartJet j = ch.jet(s);
  double f = 0.5 * (x - j.x).squaredNorm();
  for (; it < 30; ++it) {
    const Vec3 e = x - j.x;
    const Vec2 g(-e.dot(j.d1), -e.dot(j.d2));
    const double scale = std::sqrt(j.d1.squaredNorm() + j.d2.squaredNorm()) * (1.0 + x.norm());
    if (g.norm() <= 1e-12 * scale)
      break;
    Mat2 Hs;
    Hs << j.d1.dot(j.d1) - e.dot(j.d11), j.d1.dot(j.d2) - e.dot(j.d12),
        j.d2.dot(j.d1) - e.dot(j.d12), j.d2.dot(j.d2) - e.dot(j.d22);
    Eigen::SelfAdjointEigenSolver<Mat2> es(Hs);
    Vec2 step;
    if (es.eigenvalues()(0) > 1e-14 * es.eigenvalues().cwiseAbs().maxCoeff())
      step = -Hs.ldlt().solve(g);
    else {
      Mat2 G;
      G << j.d1.dot(j.d1), j.d1.dot(j.d2), j.d2.dot(j.d1), j.d2.dot(j.d2);
      step = -G.ldlt().solve(g);
    }
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      const Vec2 trial = clamp(s + t * step);
      const ChartJet jt = ch.jet(trial);
      const double ft = 0.5 * (x - jt.x).squaredNorm();
      if (ft <= f + 1e-16 * (1.0 + f)) {
        s = trial;
        j = jt;
        f = ft;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted || (t * step).norm() < 1e-15)
      break;
  }
  ClosestPoint out;
  out.chart = c;
  out.s = s;
  out.y = j.x;
  const Vec3 N = j.d1.cross(j.d2).normalized() * ch.orientation;
  out.d = (x - j.x).dot(N);
  out.iterations = it;
  return out;
}

} // namespace ctd
