#include "ctd/surface.hpp"

#include "ctd/errors.hpp"
#include "ctd/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace ctd {

namespace {

bool finite(const Vec3& v) { return v.allFinite(); }

} // namespace

const char* to_string(SurfaceKind kind)
{
  switch (kind) {
  case SurfaceKind::Sphere: return "sphere";
  case SurfaceKind::Torus: return "torus";
  case SurfaceKind::Revolution: return "revolution";
  case SurfaceKind::Ellipsoid: return "ellipsoid";
  }
  return "unknown";
}

Surface::Surface(std::string name, SurfaceKind kind, std::vector<double> params,
                 std::vector<Chart> charts, Resolution resolution,
                 std::optional<double> reach_override)
    : name_(std::move(name)), kind_(kind), params_(std::move(params)),
      charts_(std::move(charts)), resolution_(resolution), reach_override_(reach_override)
{
  for (int c = 0; c < static_cast<int>(charts_.size()); ++c) {
    const Chart& ch = charts_[c];
    Rule1D r[2];
    const int counts[2] = {resolution_.n1, resolution_.n2};
    for (int k = 0; k < 2; ++k)
      r[k] = ch.periodic[k] ? periodic_trapezoid(counts[k], ch.lo(k), ch.hi(k))
                            : gauss_legendre(counts[k], ch.lo(k), ch.hi(k));
    for (std::size_t i = 0; i < r[0].nodes.size(); ++i)
      for (std::size_t j = 0; j < r[1].nodes.size(); ++j) {
        const Vec2 s(r[0].nodes[i], r[1].nodes[j]);
        SurfaceFrame f = frame_at(c, s);
        SurfaceNode node;
        node.chart = c;
        node.s = s;
        node.param_weight = r[0].weights[i] * r[1].weights[j];
        node.weight = node.param_weight * std::sqrt(f.det_theta);
        nodes_.push_back(node);
        max_kappa_ = std::max({max_kappa_, std::abs(f.kappa1), std::abs(f.kappa2)});
        frames_.push_back(std::move(f));
      }
  }
  reach_ = reach_override_ ? *reach_override_ : 0.5 / max_kappa_;
}

Surface Surface::with_resolution(Resolution resolution) const
{
  return Surface(name_, kind_, params_, charts_, resolution, reach_override_);
}

Vec2 Surface::wrap(int chart, const Vec2& s) const
{
  const Chart& ch = charts_.at(chart);
  Vec2 out = s;
  for (int k = 0; k < 2; ++k) {
    if (!ch.periodic[k])
      continue;
    const double period = ch.hi(k) - ch.lo(k);
    double v = std::fmod(s(k) - ch.lo(k), period);
    if (v < 0)
      v += period;
    if (v >= period - 1e-12 * period)
      v = 0.0;
    out(k) = ch.lo(k) + v;
  }
  return out;
}

SurfaceFrame Surface::frame_at(int chart, const Vec2& s_in) const
{
  if (!s_in.allFinite())
    throw Error(ErrorCode::NonFiniteInput, "chart parameter is not finite");
  const Chart& ch = charts_.at(chart);
  const Vec2 s = wrap(chart, s_in);
  const ChartJet jet = ch.jet(s);
  if (!finite(jet.x) || !finite(jet.d1) || !finite(jet.d2) || !finite(jet.d11) ||
      !finite(jet.d12) || !finite(jet.d22))
    throw Error(ErrorCode::NonFiniteInput, "chart evaluation is not finite");

  SurfaceFrame f;
  f.chart = chart;
  f.s = s;
  f.y = jet.x;
  f.t1 = jet.d1;
  f.t2 = jet.d2;
  f.theta << f.t1.dot(f.t1), f.t1.dot(f.t2), f.t2.dot(f.t1), f.t2.dot(f.t2);
  f.det_theta = f.theta.determinant();
  if (!(f.det_theta > 1e-12))
    throw Error(ErrorCode::DegenerateChart, "det theta = " + std::to_string(f.det_theta));
  f.theta_inv = f.theta.inverse();

  const Vec3 N = f.t1.cross(f.t2);
  const double len = N.norm();
  const Vec3 nhat = N / len;
  f.n = ch.orientation * nhat;
  const Mat3 proj = Mat3::Identity() - nhat * nhat.transpose();
  const Vec3 dN1 = jet.d11.cross(f.t2) + f.t1.cross(jet.d12);
  const Vec3 dN2 = jet.d12.cross(f.t2) + f.t1.cross(jet.d22);
  f.dn[0] = ch.orientation * proj * dN1 / len;
  f.dn[1] = ch.orientation * proj * dN2 / len;

  f.II << jet.d11.dot(f.n), jet.d12.dot(f.n), jet.d12.dot(f.n), jet.d22.dot(f.n);

  // W t_j = -d_j n, W n = 0
  Mat3 F, B;
  F.col(0) = f.t1;
  F.col(1) = f.t2;
  F.col(2) = f.n;
  B.col(0) = -f.dn[0];
  B.col(1) = -f.dn[1];
  B.col(2) = Vec3::Zero();
  const Mat3 Wraw = B * F.inverse();
  f.symmetry_defect = (Wraw - Wraw.transpose()).norm();
  f.W = sym(Wraw);

  f.Q = f.n * f.n.transpose();
  f.P = Mat3::Identity() - f.Q;

  const auto [tau1, tau2] = local_frame(f);
  Mat2 S;
  S << tau1.dot(f.W * tau1), tau1.dot(f.W * tau2), tau2.dot(f.W * tau1), tau2.dot(f.W * tau2);
  Eigen::SelfAdjointEigenSolver<Mat2> es(S, Eigen::EigenvaluesOnly);
  f.kappa1 = es.eigenvalues()(0);
  f.kappa2 = es.eigenvalues()(1);
  f.H = f.W.trace();
  return f;
}

Vec3 tangential_gradient(const SurfaceFrame& f, const Vec2& deta)
{
  const Vec2 c = f.theta_inv * deta;
  return c(0) * f.t1 + c(1) * f.t2;
}

Vec3 tangential_gradient_ambient(const SurfaceFrame& f, const Vec3& grad)
{
  return f.P * grad;
}

Mat3 tangential_jacobian(const SurfaceFrame& f, const Vec3& dF1, const Vec3& dF2)
{
  const Mat2& ti = f.theta_inv;
  const Vec3 row1 = ti(0, 0) * f.t1 + ti(0, 1) * f.t2; // sum_b theta^{1b} t_b
  const Vec3 row2 = ti(1, 0) * f.t1 + ti(1, 1) * f.t2;
  return row1 * dF1.transpose() + row2 * dF2.transpose();
}

double surface_divergence(const SurfaceFrame& f, const Vec3& X, const Vec3& dX1, const Vec3& dX2)
{
  if (!X.allFinite() || !dX1.allFinite() || !dX2.allFinite())
    throw Error(ErrorCode::NonFiniteInput, "field is not finite");
  if (std::abs(X.dot(f.n)) >= 1e-10)
    throw Error(ErrorCode::NotTangential, "|X . n| = " + std::to_string(std::abs(X.dot(f.n))));
  return tangential_jacobian(f, dX1, dX2).trace();
}

Mat3 tangential_hessian(const SurfaceFrame& f, const Vec3& grad, const Mat3& hess)
{
  return f.P * hess * f.P + f.n.dot(grad) * f.W + (f.W * grad) * f.n.transpose();
}

double integrate_surface(const Surface& surface,
                         const std::function<double(const SurfaceFrame&)>& fn)
{
  double sum = 0.0;
  const auto& nodes = surface.nodes();
  const auto& frames = surface.node_frames();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double v = fn(frames[k]);
    if (!std::isfinite(v))
      throw Error(ErrorCode::NonFiniteInput, "integrand is not finite");
    sum += nodes[k].weight * v;
  }
  return sum;
}

std::pair<Vec3, Vec3> local_frame(const SurfaceFrame& f)
{
  const Vec3 tau1 = f.t1.normalized();
  const Vec3 tau2 = f.n.cross(tau1);
  return {tau1, tau2};
}

} // namespace ctd
