#include "ctd/thin_domain.hpp"

#include "ctd/errors.hpp"
#include "ctd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ctd {

ProfilePair shell_profile()
{
  return {"shell", QuadraticPolynomial(0.0), QuadraticPolynomial(1.0)};
}

ProfilePair as_example_profile()
{
  QuadraticPolynomial g0;
  g0.add_quadratic(2, 2, 1.0);
  QuadraticPolynomial g1 = g0;
  g1.add_constant(1.0);
  return {"as_example", g0, g1};
}

ProfilePair nas_example_profile()
{
  QuadraticPolynomial g0, g1(2.0);
  g0.add_linear(2, 1.0);
  g1.add_linear(1, 1.0);
  return {"nas_example", g0, g1};
}

double jacobian(const SurfaceFrame& f, double r, double reach)
{
  if (!std::isfinite(r))
    throw Error(ErrorCode::NonFiniteInput, "distance is not finite");
  if (std::abs(r) >= reach)
    throw Error(ErrorCode::OutOfTube, "|r| = " + std::to_string(std::abs(r)));
  return (1.0 - r * f.kappa1) * (1.0 - r * f.kappa2);
}

ThinDomain::ThinDomain(std::shared_ptr<const Surface> surface, ProfilePair profiles, double eps,
                       double gamma0, double gamma1, double nu)
    : surface_(std::move(surface)), profiles_(std::move(profiles)), eps_(eps), gamma0_(gamma0),
      gamma1_(gamma1), nu_(nu)
{
  if (!(eps_ > 0.0 && eps_ <= 1.0))
    throw Error(ErrorCode::InvalidDomain, "eps must lie in (0, 1]");
  if (!(gamma0_ >= 0.0 && gamma1_ >= 0.0))
    throw Error(ErrorCode::InvalidDomain, "friction coefficients must be nonnegative");
  if (!(nu_ > 0.0))
    throw Error(ErrorCode::InvalidDomain, "viscosity must be positive");

  const auto& nodes = surface_->nodes();
  const auto& frames = surface_->node_frames();
  const double reach = surface_->reach();
  min_g_ = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  for (const auto& f : frames) {
    const double a = g(0).value(f.y), b = g(1).value(f.y);
    min_g_ = std::min(min_g_, b - a);
    max_abs = std::max({max_abs, std::abs(a), std::abs(b)});
  }
  if (!(min_g_ > 1e-6))
    throw Error(ErrorCode::InvalidDomain,
                "thickness g1 - g0 must be positive, min = " + std::to_string(min_g_));
  if (!(eps_ * max_abs < reach))
    throw Error(ErrorCode::InvalidDomain, "eps * max|g_i| = " + std::to_string(eps_ * max_abs) +
                                              " exceeds the tube radius " + std::to_string(reach));

  cpmap_ = std::make_shared<ClosestPointMap>(surface_);

  const Rule1D radial = gauss_legendre(surface_->resolution().nr);
  volume_.reserve(nodes.size() * radial.nodes.size());
  for (int i = 0; i < 2; ++i)
    boundary_[i].reserve(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const SurfaceFrame& f = frames[k];
    const double a = eps_ * g(0).value(f.y), b = eps_ * g(1).value(f.y);
    for (std::size_t q = 0; q < radial.nodes.size(); ++q) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * radial.nodes[q];
      VolumeNode v;
      v.x = f.y + r * f.n;
      v.r = r;
      v.node = static_cast<int>(k);
      v.weight = nodes[k].weight * 0.5 * (b - a) * radial.weights[q] * jacobian(f, r, reach);
      volume_.push_back(v);
    }
    for (int i = 0; i < 2; ++i) {
      const BoundaryFrame bf = boundary_frame(*this, i, f);
      BoundaryNode bn;
      bn.x = bf.x;
      bn.n_eps = bf.n_eps;
      bn.node = static_cast<int>(k);
      bn.weight = nodes[k].weight * bf.area_factor;
      boundary_[i].push_back(bn);
    }
  }
}

ThinDomain ThinDomain::with_eps(double eps) const
{
  return ThinDomain(surface_, profiles_, eps, gamma0_, gamma1_, nu_);
}

Vec3 parametrized_normal(const SurfaceFrame& f, double h, const Vec3& grad_h)
{
  const Mat3 R = Mat3::Identity() - h * f.W;
  const Vec3 tau = R.partialPivLu().solve(grad_h);
  return (f.n - tau) / std::sqrt(1.0 + tau.squaredNorm());
}

namespace {

struct NormalData {
  Vec3 tau;
  Vec3 n_eps;
  double stretch;
};

NormalData boundary_normal(const ThinDomain& dom, int i, const SurfaceFrame& f)
{
  const double eps = dom.eps();
  const double gi = dom.g(i).value(f.y);
  const Mat3 R = Mat3::Identity() - eps * gi * f.W;
  const double det = R.determinant();
  if (!(std::abs(det) > 1e-12))
    throw Error(ErrorCode::SingularResolvent, "det(I - eps g W) = " + std::to_string(det));
  const Vec3 grad = f.P * dom.g(i).gradient(f.y);
  NormalData out;
  out.tau = R.partialPivLu().solve(grad);
  out.stretch = std::sqrt(1.0 + eps * eps * out.tau.squaredNorm());
  const double sign = (i == 1) ? 1.0 : -1.0;
  out.n_eps = sign * (f.n - eps * out.tau) / out.stretch;
  return out;
}

// grad_G of n^i_eps through central differences along chart parameters.
Mat3 tangential_normal_gradient(const ThinDomain& dom, int i, const SurfaceFrame& f)
{
  const Surface& S = dom.surface();
  const double h = 1e-5 * (1.0 + f.y.norm());
  Vec3 d[2];
  for (int a = 0; a < 2; ++a) {
    Vec2 sp = f.s, sm = f.s;
    sp(a) += h;
    sm(a) -= h;
    const Vec3 np = boundary_normal(dom, i, S.frame_at(f.chart, sp)).n_eps;
    const Vec3 nm = boundary_normal(dom, i, S.frame_at(f.chart, sm)).n_eps;
    d[a] = (np - nm) / (2.0 * h);
  }
  return tangential_jacobian(f, d[0], d[1]);
}

} // namespace

Mat3 extended_weingarten(const ThinDomain& dom, int i, const SurfaceFrame& f, double d)
{
  const Vec3 ne = boundary_normal(dom, i, f).n_eps;
  const Mat3 R = Mat3::Identity() - d * f.W;
  const Mat3 grad = R.partialPivLu().solve(tangential_normal_gradient(dom, i, f));
  return -(Mat3::Identity() - ne * ne.transpose()) * grad;
}

BoundaryFrame boundary_frame(const ThinDomain& dom, int i, const SurfaceFrame& f,
                             bool with_curvature)
{
  const NormalData nd = boundary_normal(dom, i, f);
  const double r = dom.eps() * dom.g(i).value(f.y);
  BoundaryFrame b;
  b.side = i;
  b.x = f.y + r * f.n;
  b.tau = nd.tau;
  b.n_eps = nd.n_eps;
  b.Q_eps = nd.n_eps * nd.n_eps.transpose();
  b.P_eps = Mat3::Identity() - b.Q_eps;
  b.area_factor = jacobian(f, r, dom.surface().reach()) * nd.stretch;
  if (with_curvature) {
    const Mat3 W = extended_weingarten(dom, i, f, r);
    b.W_eps = W;
    b.H_eps = W.trace();
  }
  return b;
}

BoundaryCurvature boundary_weingarten(const ThinDomain& dom, int i, const Vec3& x)
{
  const ClosestPoint cp = dom.cpmap().project(x);
  const SurfaceFrame f = dom.surface().frame_at(cp.chart, cp.s);
  BoundaryCurvature out;
  out.W = extended_weingarten(dom, i, f, cp.d);
  out.H = out.W.trace();
  out.symmetry_defect = (out.W - out.W.transpose()).norm();
  return out;
}

double integrate_volume(const ThinDomain& dom, const std::function<double(const Vec3&)>& phi)
{
  double sum = 0.0;
  for (const auto& v : dom.volume_nodes()) {
    const double val = phi(v.x);
    if (!std::isfinite(val))
      throw Error(ErrorCode::NonFiniteInput, "integrand is not finite");
    sum += v.weight * val;
  }
  return sum;
}

double integrate_volume(const ThinDomain& dom, const std::function<double(const Vec3&)>& phi,
                        int radial_nodes)
{
  const Rule1D radial = gauss_legendre(radial_nodes);
  const auto& nodes = dom.surface().nodes();
  const auto& frames = dom.surface().node_frames();
  const double reach = dom.surface().reach();
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const SurfaceFrame& f = frames[k];
    const double a = dom.eps() * dom.g(0).value(f.y), b = dom.eps() * dom.g(1).value(f.y);
    double inner = 0.0;
    for (std::size_t q = 0; q < radial.nodes.size(); ++q) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * radial.nodes[q];
      const double val = phi(f.y + r * f.n);
      if (!std::isfinite(val))
        throw Error(ErrorCode::NonFiniteInput, "integrand is not finite");
      inner += radial.weights[q] * val * jacobian(f, r, reach);
    }
    sum += nodes[k].weight * 0.5 * (b - a) * inner;
  }
  return sum;
}

double integrate_boundary(const ThinDomain& dom, int i,
                          const std::function<double(const BoundaryNode&)>& phi)
{
  double sum = 0.0;
  for (const auto& b : dom.boundary_nodes(i)) {
    const double val = phi(b);
    if (!std::isfinite(val))
      throw Error(ErrorCode::NonFiniteInput, "integrand is not finite");
    sum += b.weight * val;
  }
  return sum;
}

ExtendedValue constant_extension(const ClosestPointMap& cp, const QuadraticPolynomial& eta,
                                 const Vec3& x)
{
  const ClosestPoint p = cp.project(x);
  if (std::abs(p.d) >= cp.surface().reach())
    throw Error(ErrorCode::OutOfTube, "point lies outside the tubular neighbourhood");
  ExtendedValue out;
  out.value = eta.value(p.y);
  if (cp.surface().kind() == SurfaceKind::Sphere) {
    // W = -P, no chart needed, so the poles are fine
    const Mat3 P = Mat3::Identity() - p.y * p.y.transpose();
    out.gradient = P * eta.gradient(p.y) / (1.0 + p.d);
    return out;
  }
  const SurfaceFrame f = cp.surface().frame_at(p.chart, p.s);
  const Mat3 R = Mat3::Identity() - p.d * f.W;
  out.gradient = R.partialPivLu().solve(f.P * eta.gradient(f.y));
  return out;
}

ExtendedNormal normal_extension(const ClosestPointMap& cp, const Vec3& x)
{
  ExtendedNormal out;
  out.cp = cp.project(x);
  out.frame = cp.surface().frame_at(out.cp.chart, out.cp.s);
  out.n = out.frame.n;
  const Mat3 R = Mat3::Identity() - out.cp.d * out.frame.W;
  out.gradient = -R.partialPivLu().solve(out.frame.W);
  return out;
}

} // namespace ctd
