#include "ctd/fields.hpp"

#include "ctd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ctd {

const char* to_string(Provenance p)
{
  switch (p) {
  case Provenance::Analytic: return "analytic";
  case Provenance::ClosedForm: return "closed_form";
  case Provenance::FiniteDifference: return "finite_difference";
  }
  return "unknown";
}

Mat3 fd_jacobian(const std::function<Vec3(const Vec3&)>& f, const Vec3& x, double h)
{
  if (h <= 0.0)
    h = 1e-5 * (1.0 + x.norm());
  Mat3 g;
  for (int i = 0; i < 3; ++i) {
    Vec3 xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g.row(i) = ((f(xp) - f(xm)) / (2.0 * h)).transpose();
  }
  return g;
}

AmbientVectorField RigidField::field(std::string tag) const
{
  const Vec3 a_ = a, b_ = b;
  const Mat3 A = rotation_gradient(a_);
  return {[a_, b_](const Vec3& x) -> Vec3 { return a_.cross(x) + b_; },
          [A](const Vec3&) -> Mat3 { return A; }, std::move(tag), Provenance::Analytic};
}

AmbientVectorField polynomial_field(const QuadraticVectorField& p, std::string tag)
{
  return {[p](const Vec3& x) { return p.value(x); }, [p](const Vec3& x) { return p.jacobian(x); },
          std::move(tag), Provenance::Analytic};
}

Mat3 strain_rate(const AmbientVectorField& u, const Vec3& x)
{
  return sym(u.jacobian(x));
}

Mat3 surface_strain(const SurfaceFrame& f, const Mat3& ambient_jacobian)
{
  return f.P * sym(f.P * ambient_jacobian) * f.P;
}

double killing_ratio(const Surface& surface, const AmbientVectorField& v)
{
  const double num = integrate_surface(surface, [&](const SurfaceFrame& f) {
    return surface_strain(f, v.jacobian(f.y)).squaredNorm();
  });
  const double den = integrate_surface(surface, [&](const SurfaceFrame& f) {
    return v(f.y).squaredNorm();
  });
  if (den <= 0.0)
    return std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

namespace {

void check_killing_in_kg(const ThinDomain& dom, const AmbientVectorField& v)
{
  const Surface& S = dom.surface();
  double vmax = 0.0, normal = 0.0, kg = 0.0;
  for (const auto& f : S.node_frames()) {
    const Vec3 val = v(f.y);
    vmax = std::max(vmax, val.norm());
    normal = std::max(normal, std::abs(val.dot(f.n)));
    const Vec3 dg = f.P * (dom.g(1).gradient(f.y) - dom.g(0).gradient(f.y));
    kg = std::max(kg, std::abs(val.dot(dg)));
  }
  const double scale = std::max(1.0, vmax);
  if (vmax == 0.0)
    throw Error(ErrorCode::NotKilling, "field vanishes on the surface");
  if (normal > 1e-8 * scale)
    throw Error(ErrorCode::NotKilling, "field is not tangential, max |v.n| = " + std::to_string(normal));
  const double ratio = killing_ratio(S, v);
  if (!(ratio < 1e-6))
    throw Error(ErrorCode::NotKilling, "||D_G v|| / ||v|| = " + std::to_string(ratio));
  if (kg > 1e-8 * scale)
    throw Error(ErrorCode::NotInKg, "max |v . grad g| = " + std::to_string(kg));
}

} // namespace

AmbientVectorField counterexample_field_general(const ThinDomain& dom, const AmbientVectorField& v)
{
  check_killing_in_kg(dom, v);
  const ThinDomain* d = &dom;
  auto eval = [d, v](const Vec3& x) -> Vec3 {
    const ClosestPoint cp = d->cpmap().project(x);
    const SurfaceFrame f = d->surface().frame_at(cp.chart, cp.s);
    const Vec3 vy = v(f.y);
    const Vec3 dg0 = f.P * d->g(0).gradient(f.y);
    return (Mat3::Identity() - cp.d * f.W) * vy + d->eps() * vy.dot(dg0) * f.n;
  };
  return {eval, {}, "counterexample_general", Provenance::FiniteDifference};
}

AmbientVectorField counterexample_field(const ThinDomain& dom, const RigidField& v)
{
  if (dom.surface().kind() != SurfaceKind::Sphere || v.b.norm() != 0.0)
    return counterexample_field_general(dom, v.field());
  check_killing_in_kg(dom, v.field());
  const Vec3 a = v.a;
  const Mat3 A = rotation_gradient(a);
  const QuadraticPolynomial g0 = dom.g(0);
  const double eps = dom.eps();
  auto eval = [a, g0, eps](const Vec3& x) -> Vec3 {
    const double r = x.norm();
    const Vec3 y = x / r;
    const double h = a.cross(y).dot(g0.gradient(y));
    return a.cross(x) + eps * h * y;
  };
  auto jac = [a, A, g0, eps](const Vec3& x) -> Mat3 {
    const double r = x.norm();
    const Vec3 y = x / r;
    const Mat3 P = Mat3::Identity() - y * y.transpose();
    const Vec3 G = g0.gradient(y);
    const double h = a.cross(y).dot(G);
    const Vec3 dh = A * G + g0.hessian() * a.cross(y);
    const Vec3 grad_h = P * dh / r;
    return A + eps * (grad_h * y.transpose() + h * P / r);
  };
  return {eval, jac, "counterexample_sphere", Provenance::ClosedForm};
}

Vec3 g_field_value(const ThinDomain& dom, const Vec3& x, const Vec3& u)
{
  const ClosestPoint cp = dom.cpmap().project(x);
  const SurfaceFrame f = dom.surface().frame_at(cp.chart, cp.s);
  const double eps = dom.eps();
  const double a = eps * dom.g(0).value(f.y), b = eps * dom.g(1).value(f.y);
  const double s = cp.d - a, t = b - cp.d, eg = b - a;
  const Vec3 n0 = boundary_frame(dom, 0, f).n_eps;
  const Vec3 n1 = boundary_frame(dom, 1, f).n_eps;
  const Mat3 W0 = extended_weingarten(dom, 0, f, cp.d);
  const Mat3 W1 = extended_weingarten(dom, 1, f, cp.d);
  const Vec3 nt1 = (s * n1 - t * n0) / eg;
  const Vec3 nt2 = (s * (dom.gamma(1) / dom.nu()) * n1 + t * (dom.gamma(0) / dom.nu()) * n0) / eg;
  const Mat3 Wt = (s * W1 - t * W0) / eg;
  return 2.0 * nt1.cross(Wt * u) + nt2.cross(u);
}

AmbientVectorField g_field(const ThinDomain& dom, const AmbientVectorField& u)
{
  const ThinDomain* d = &dom;
  return {[d, u](const Vec3& x) { return g_field_value(*d, x, u(x)); }, {}, "G(" + u.tag + ")",
          Provenance::FiniteDifference};
}

} // namespace ctd
