#include "ctd/surface.hpp"

#include <cmath>
#include <numbers>

namespace ctd {

namespace {

constexpr double pi = std::numbers::pi;

// Default tube radius for the unit sphere. The closest point map is exact for
// every |r| < 1, so the half-curvature-radius default is relaxed.
constexpr double sphere_reach = 0.9;

} // namespace

Surface make_sphere(Resolution res, std::optional<double> reach)
{
  Chart ch;
  ch.lo = Vec2(0.0, 0.0);
  ch.hi = Vec2(pi, 2.0 * pi);
  ch.periodic = {false, true};
  ch.jet = [](const Vec2& s) {
    const double sa = std::sin(s(0)), ca = std::cos(s(0));
    const double sb = std::sin(s(1)), cb = std::cos(s(1));
    ChartJet j;
    j.x = Vec3(sa * cb, sa * sb, ca);
    j.d1 = Vec3(ca * cb, ca * sb, -sa);
    j.d2 = Vec3(-sa * sb, sa * cb, 0.0);
    j.d11 = -j.x;
    j.d12 = Vec3(-ca * sb, ca * cb, 0.0);
    j.d22 = Vec3(-sa * cb, -sa * sb, 0.0);
    return j;
  };
  return Surface("sphere", SurfaceKind::Sphere, {}, {ch}, res, reach ? reach : sphere_reach);
}

Surface make_torus(double R, double a, Resolution res)
{
  Chart ch;
  ch.lo = Vec2(0.0, 0.0);
  ch.hi = Vec2(2.0 * pi, 2.0 * pi);
  ch.periodic = {true, true};
  ch.orientation = -1.0;
  ch.jet = [R, a](const Vec2& s) {
    const double su = std::sin(s(0)), cu = std::cos(s(0));
    const double sv = std::sin(s(1)), cv = std::cos(s(1));
    const double rho = R + a * cu;
    ChartJet j;
    j.x = Vec3(rho * cv, rho * sv, a * su);
    j.d1 = Vec3(-a * su * cv, -a * su * sv, a * cu);
    j.d2 = Vec3(-rho * sv, rho * cv, 0.0);
    j.d11 = Vec3(-a * cu * cv, -a * cu * sv, -a * su);
    j.d12 = Vec3(a * su * sv, -a * su * cv, 0.0);
    j.d22 = Vec3(-rho * cv, -rho * sv, 0.0);
    return j;
  };
  return Surface("torus", SurfaceKind::Torus, {R, a}, {ch}, res);
}

Surface make_ellipsoid(double a, double b, double c, Resolution res)
{
  Chart ch;
  ch.lo = Vec2(0.0, 0.0);
  ch.hi = Vec2(pi, 2.0 * pi);
  ch.periodic = {false, true};
  const Vec3 axes(a, b, c);
  ch.jet = [axes](const Vec2& s) {
    const double sa = std::sin(s(0)), ca = std::cos(s(0));
    const double sb = std::sin(s(1)), cb = std::cos(s(1));
    ChartJet j;
    j.x = Vec3(sa * cb, sa * sb, ca).cwiseProduct(axes);
    j.d1 = Vec3(ca * cb, ca * sb, -sa).cwiseProduct(axes);
    j.d2 = Vec3(-sa * sb, sa * cb, 0.0).cwiseProduct(axes);
    j.d11 = -j.x;
    j.d12 = Vec3(-ca * sb, ca * cb, 0.0).cwiseProduct(axes);
    j.d22 = Vec3(-sa * cb, -sa * sb, 0.0).cwiseProduct(axes);
    return j;
  };
  return Surface("ellipsoid", SurfaceKind::Ellipsoid, {a, b, c}, {ch}, res);
}

Surface make_revolution(const MeridianProfile& profile, Resolution res, std::vector<double> params)
{
  Chart ch;
  ch.lo = Vec2(profile.s0, 0.0);
  ch.hi = Vec2(profile.s1, 2.0 * pi);
  ch.periodic = {false, true};
  ch.jet = [profile](const Vec2& s) {
    const auto p = profile.phi(s(0));
    const auto q = profile.psi(s(0));
    const double st = std::sin(s(1)), ct = std::cos(s(1));
    ChartJet j;
    j.x = Vec3(p[0] * ct, p[0] * st, q[0]);
    j.d1 = Vec3(p[1] * ct, p[1] * st, q[1]);
    j.d2 = Vec3(-p[0] * st, p[0] * ct, 0.0);
    j.d11 = Vec3(p[2] * ct, p[2] * st, q[2]);
    j.d12 = Vec3(-p[1] * st, p[1] * ct, 0.0);
    j.d22 = Vec3(-p[0] * ct, -p[0] * st, 0.0);
    return j;
  };
  // orientation from a sample point near the middle of the meridian
  const Vec2 mid(0.5 * (profile.s0 + profile.s1), 0.0);
  const ChartJet j = ch.jet(mid);
  const Vec3 N = j.d1.cross(j.d2);
  const Vec3 radial(j.x(0), j.x(1), 0.0);
  ch.orientation = N.dot(radial) >= 0.0 ? 1.0 : -1.0;
  return Surface("revolution", SurfaceKind::Revolution, std::move(params), {ch}, res);
}

Surface make_bumped_revolution(double b, Resolution res)
{
  MeridianProfile prof;
  prof.s0 = 0.0;
  prof.s1 = pi;
  auto rho = [b](double s) {
    const double c = std::cos(s);
    return std::array<double, 3>{1.0 + b * c * c, -b * std::sin(2.0 * s), -2.0 * b * std::cos(2.0 * s)};
  };
  prof.phi = [rho](double s) {
    const auto r = rho(s);
    const double sn = std::sin(s), cs = std::cos(s);
    return std::array<double, 3>{r[0] * sn, r[1] * sn + r[0] * cs,
                                 r[2] * sn + 2.0 * r[1] * cs - r[0] * sn};
  };
  prof.psi = [rho](double s) {
    const auto r = rho(s);
    const double sn = std::sin(s), cs = std::cos(s);
    return std::array<double, 3>{r[0] * cs, r[1] * cs - r[0] * sn,
                                 r[2] * cs - 2.0 * r[1] * sn - r[0] * cs};
  };
  return make_revolution(prof, res, {b});
}

} // namespace ctd
