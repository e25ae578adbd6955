#include "ctd/errors.hpp"
#include "ctd/thin_domain.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

using namespace ctd;

namespace {

constexpr double pi = std::numbers::pi;

std::shared_ptr<const Surface> sphere(Resolution r = {})
{
  return std::make_shared<const Surface>(make_sphere(r));
}

ErrorCode code_of(const std::function<void()>& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ParseError;
}

QuadraticPolynomial poly(double c, Vec3 l, Mat3 q = Mat3::Zero()) { return {c, l, q}; }

// Boundary point as a function of the chart parameters.
Vec3 boundary_point(const ThinDomain& dom, int i, int chart, const Vec2& s)
{
  const SurfaceFrame f = dom.surface().frame_at(chart, s);
  return f.y + dom.eps() * dom.g(i).value(f.y) * f.n;
}

} // namespace

TEST(Jacobian, SphereValues)
{
  const auto s = sphere({8, 16, 2});
  const SurfaceFrame f = s->frame_at(0, Vec2(1.0, 1.0));
  EXPECT_NEAR(jacobian(f, 0.1, s->reach()), 1.21, 1e-14);
  EXPECT_NEAR(jacobian(f, -0.5, s->reach()), 0.25, 1e-14);
  EXPECT_EQ(code_of([&] { jacobian(f, 0.9, s->reach()); }), ErrorCode::OutOfTube);
  EXPECT_EQ(code_of([&] { jacobian(f, -1.0, s->reach()); }), ErrorCode::OutOfTube);
}

TEST(ThinDomain, RejectsInvalidParameters)
{
  const auto s = sphere({8, 16, 2});
  EXPECT_EQ(code_of([&] { ThinDomain(s, shell_profile(), 0.0); }), ErrorCode::InvalidDomain);
  EXPECT_EQ(code_of([&] { ThinDomain(s, shell_profile(), 1.5); }), ErrorCode::InvalidDomain);
  // eps max|g| must stay below the reach
  EXPECT_EQ(code_of([&] { ThinDomain(s, shell_profile(), 1.0); }), ErrorCode::InvalidDomain);
  ProfilePair flat{"flat", QuadraticPolynomial(1.0), QuadraticPolynomial(1.0)};
  EXPECT_EQ(code_of([&] { ThinDomain(s, flat, 0.1); }), ErrorCode::InvalidDomain);
  ProfilePair crossing{"crossing", poly(0, Vec3(0, 0, 1)), QuadraticPolynomial(0.5)};
  EXPECT_EQ(code_of([&] { ThinDomain(s, crossing, 0.1); }), ErrorCode::InvalidDomain);
}

TEST(ThinDomain, NasProfileMinimumThickness)
{
  const ThinDomain d(sphere(), nas_example_profile(), 0.05);
  EXPECT_NEAR(d.min_thickness(), 2.0 - std::sqrt(2.0), 1e-3);
}

TEST(ClosestPoint, SphereClosedForm)
{
  const ClosestPointMap cp(sphere({8, 16, 2}));
  const Vec3 x(0.3, -0.4, 1.1);
  const ClosestPoint p = cp.project(x);
  EXPECT_LT((p.y - x.normalized()).norm(), 1e-14);
  EXPECT_NEAR(p.d, x.norm() - 1.0, 1e-14);
}

TEST(ClosestPoint, RecoversOffsetPoints)
{
  const Resolution r{16, 32, 4};
  std::vector<std::shared_ptr<const Surface>> surfaces{
      sphere(r), std::make_shared<const Surface>(make_torus(2.0, 0.5, r)),
      std::make_shared<const Surface>(make_ellipsoid(1.0, 1.2, 0.8, r)),
      std::make_shared<const Surface>(make_bumped_revolution(0.3, r))};
  std::mt19937_64 rng(3);
  for (const auto& s : surfaces) {
    const ClosestPointMap cp(s);
    const Chart& ch = s->charts()[0];
    std::uniform_real_distribution<double> u1(ch.lo(0) + 0.05, ch.hi(0) - 0.05);
    std::uniform_real_distribution<double> u2(ch.lo(1), ch.hi(1));
    std::uniform_real_distribution<double> ud(-0.9 * s->reach(), 0.9 * s->reach());
    for (int k = 0; k < 100; ++k) {
      const SurfaceFrame f = s->frame_at(0, Vec2(u1(rng), u2(rng)));
      const double d = ud(rng);
      const Vec3 x = f.y + d * f.n;
      const ClosestPoint p = cp.project(x);
      EXPECT_LT((p.y - f.y).norm(), 1e-9) << s->name();
      EXPECT_NEAR(p.d, d, 1e-9) << s->name();
      const SurfaceFrame g = s->frame_at(p.chart, p.s);
      EXPECT_LT((g.y + p.d * g.n - x).norm(), 1e-10) << s->name();
    }
  }
}

TEST(BoundaryFrame, SphereTiltedProfile)
{
  ProfilePair pp{"tilted", poly(0, Vec3(0, 0, 1)), poly(1, Vec3(0, 0, 1))};
  const ThinDomain dom(sphere({8, 16, 2}), pp, 0.1);
  const SurfaceFrame f = dom.surface().frame_at(0, Vec2(pi / 2, 0.0));
  const BoundaryFrame b = boundary_frame(dom, 0, f);
  // g0 vanishes at (1, 0, 0), so tau = P e3 = e3
  EXPECT_LT((b.tau - Vec3(0, 0, 1)).norm(), 1e-14);
  const Vec3 want = -(Vec3(1, 0, 0) - 0.1 * Vec3(0, 0, 1)) / std::sqrt(1.01);
  EXPECT_LT((b.n_eps - want).norm(), 1e-14);
  EXPECT_NEAR(b.n_eps.norm(), 1.0, 1e-14);
}

TEST(BoundaryFrame, ConstantProfileKeepsNormal)
{
  const ThinDomain dom(sphere({8, 16, 2}), shell_profile(), 0.1);
  for (const auto& f : dom.surface().node_frames()) {
    EXPECT_LT(boundary_frame(dom, 0, f).tau.norm(), 1e-15);
    EXPECT_LT((boundary_frame(dom, 1, f).n_eps - f.n).norm(), 1e-14);
    EXPECT_LT((boundary_frame(dom, 0, f).n_eps + f.n).norm(), 1e-14);
  }
}

TEST(BoundaryFrame, NormalIsOrthogonalToBoundaryTangents)
{
  const Resolution r{12, 24, 2};
  for (auto surf : {sphere(r), std::make_shared<const Surface>(make_ellipsoid(1.0, 1.2, 0.8, r))}) {
    for (const auto& pp : {as_example_profile(), nas_example_profile()}) {
      const ThinDomain dom(surf, pp, 0.05);
      for (int i = 0; i < 2; ++i) {
        for (const auto& f : dom.surface().node_frames()) {
          const BoundaryFrame b = boundary_frame(dom, i, f);
          const double h = 1e-6;
          for (int a = 0; a < 2; ++a) {
            Vec2 e = Vec2::Zero();
            e(a) = h;
            const Vec3 t = (boundary_point(dom, i, 0, f.s + e) - boundary_point(dom, i, 0, f.s - e)) / (2 * h);
            EXPECT_LT(std::abs(t.dot(b.n_eps)), 1e-8 * (1.0 + t.norm()));
          }
          // the same normal from the parametrized surface y + h n
          const double hh = dom.eps() * dom.g(i).value(f.y);
          const Vec3 gh = dom.eps() * f.P * dom.g(i).gradient(f.y);
          const Vec3 pn = parametrized_normal(f, hh, gh);
          EXPECT_LT((pn - (i == 1 ? 1.0 : -1.0) * b.n_eps).norm(), 1e-12);
        }
      }
    }
  }
}

TEST(BoundaryWeingarten, SphereShellOuterBoundary)
{
  const ThinDomain dom(sphere({8, 16, 2}), shell_profile(), 0.1);
  for (const auto& f : dom.surface().node_frames()) {
    const Vec3 x = 1.1 * f.y;
    const BoundaryCurvature c = boundary_weingarten(dom, 1, x);
    EXPECT_LT((c.W + f.P / 1.1).norm(), 1e-8);
    EXPECT_NEAR(c.H, -2.0 / 1.1, 1e-8);
    EXPECT_LT(c.symmetry_defect, 1e-7);
  }
}

// Independent oracle: differentiate the normal of the parametrized boundary.
TEST(BoundaryWeingarten, MatchesParametrizedBoundaryOracle)
{
  const auto s = std::make_shared<const Surface>(make_ellipsoid(1.0, 1.2, 0.8, {8, 16, 2}));
  const ThinDomain dom(s, as_example_profile(), 0.1);
  // boundary tangents t_a + eps (d_a g) n + eps g d_a n from the chart jet
  auto tangent = [&](int i, const SurfaceFrame& f, int a) {
    const Vec3 t = a == 0 ? f.t1 : f.t2;
    const double g = dom.g(i).value(f.y);
    return Vec3(t + dom.eps() * (dom.g(i).gradient(f.y).dot(t) * f.n + g * f.dn[a]));
  };
  auto normal = [&](int i, const Vec2& q) {
    const SurfaceFrame f = dom.surface().frame_at(0, q);
    Vec3 nn = tangent(i, f, 0).cross(tangent(i, f, 1)).normalized();
    const Vec3 ref = dom.surface().frame_at(0, q).n * (i == 1 ? 1.0 : -1.0);
    return Vec3(nn.dot(ref) < 0 ? -nn : nn);
  };
  for (int i = 0; i < 2; ++i) {
    for (const auto& f : dom.surface().node_frames()) {
      const double h = 1e-4;
      Eigen::Matrix<double, 3, 2> T, dN;
      for (int a = 0; a < 2; ++a) {
        Vec2 e = Vec2::Zero();
        e(a) = h;
        T.col(a) = tangent(i, f, a);
        dN.col(a) = (normal(i, f.s + e) - normal(i, f.s - e)) / (2 * h);
      }
      const Mat2 theta_inv = (T.transpose() * T).inverse();
      const Mat3 oracle = -T * theta_inv * dN.transpose();
      const BoundaryCurvature c = boundary_weingarten(dom, i, boundary_point(dom, i, 0, f.s));
      EXPECT_LT((c.W - oracle).norm(), 1e-6);
    }
  }
}

TEST(Integration, ShellVolumeAndArea)
{
  const ThinDomain dom(sphere(), shell_profile(), 0.1);
  EXPECT_NEAR(integrate_volume(dom, [](const Vec3&) { return 1.0; }), 1.386490, 1e-6);
  EXPECT_NEAR(integrate_volume(dom, [](const Vec3&) { return 1.0; }), 4 * pi * 0.331 / 3, 1e-10);
  EXPECT_NEAR(integrate_boundary(dom, 1, [](const BoundaryNode&) { return 1.0; }), 15.2053, 1e-4);
  EXPECT_NEAR(integrate_boundary(dom, 0, [](const BoundaryNode&) { return 1.0; }), 4 * pi, 1e-10);
}

TEST(Integration, ShellMomentAgainstClosedFormAndMonteCarlo)
{
  const ThinDomain dom(sphere(), shell_profile(), 0.1);
  auto phi = [](const Vec3& x) { return x(1) * x(1) + x(2) * x(2); };
  const double q = integrate_volume(dom, phi);
  const double exact = 8 * pi / 15 * (std::pow(1.1, 5) - 1.0);
  EXPECT_NEAR(q, exact, 1e-10);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.1, 1.1);
  const long n = 2'000'000;
  double sum = 0.0, sum2 = 0.0;
  for (long k = 0; k < n; ++k) {
    const Vec3 x(u(rng), u(rng), u(rng));
    const double r = x.norm();
    const double v = (r >= 1.0 && r <= 1.1) ? phi(x) : 0.0;
    sum += v;
    sum2 += v * v;
  }
  const double box = std::pow(2.2, 3);
  const double mean = sum / n;
  const double sigma = box * std::sqrt((sum2 / n - mean * mean) / n);
  EXPECT_LT(std::abs(box * mean - q), 3 * sigma);
}

TEST(Integration, BoundaryAreaMatchesParametrization)
{
  const auto s = sphere({32, 64, 4});
  const ThinDomain dom(s, nas_example_profile(), 0.05);
  for (int i = 0; i < 2; ++i) {
    double oracle = 0.0;
    for (const auto& nd : s->nodes()) {
      const double h = 1e-6;
      const Vec3 a = (boundary_point(dom, i, 0, nd.s + Vec2(h, 0)) - boundary_point(dom, i, 0, nd.s - Vec2(h, 0))) / (2 * h);
      const Vec3 b = (boundary_point(dom, i, 0, nd.s + Vec2(0, h)) - boundary_point(dom, i, 0, nd.s - Vec2(0, h))) / (2 * h);
      oracle += nd.param_weight * a.cross(b).norm();
    }
    const double area = integrate_boundary(dom, i, [](const BoundaryNode&) { return 1.0; });
    EXPECT_NEAR(area, oracle, 1e-6 * oracle);
  }
}

// On the sphere J = (1 + r)^2, so the volume is the exact Steiner polynomial in eps.
TEST(Integration, VolumeMatchesSteinerExpansion)
{
  const auto s = sphere();
  for (const auto& pp : {as_example_profile(), nas_example_profile()}) {
    for (double eps : {0.1, 0.01}) {
      const ThinDomain dom(s, pp, eps);
      const double vol = integrate_volume(dom, [](const Vec3&) { return 1.0; });
      const double steiner = integrate_surface(*s, [&](const SurfaceFrame& f) {
        const double a = eps * pp.g0.value(f.y), b = eps * pp.g1.value(f.y);
        return (b - a) + (b * b - a * a) + (b * b * b - a * a * a) / 3.0;
      });
      EXPECT_NEAR(vol, steiner, 1e-10 * steiner) << pp.name;
    }
  }
}

TEST(Integration, VolumeOverEpsApproachesThickness)
{
  // centred profile: the first order correction cancels
  ProfilePair centred{"centred", QuadraticPolynomial(-0.5), QuadraticPolynomial(0.5)};
  const ThinDomain dom(sphere(), centred, 0.01);
  const double vol = integrate_volume(dom, [](const Vec3&) { return 1.0; });
  EXPECT_NEAR(vol / 0.01, 4 * pi, 0.01 * 4 * pi);

  // otherwise the ratio approaches 1 linearly in eps
  const auto s = sphere();
  double prev = 0.0;
  for (double eps : {0.04, 0.02, 0.01, 0.005}) {
    const ThinDomain d(s, as_example_profile(), eps);
    const double thick = integrate_surface(*s, [](const SurfaceFrame&) { return 1.0; });
    const double dev = std::abs(integrate_volume(d, [](const Vec3&) { return 1.0; }) / (eps * thick) - 1.0);
    if (prev > 0.0)
      EXPECT_NEAR(prev / dev, 2.0, 0.05);
    prev = dev;
  }
}

TEST(Integration, RadialNodeCountConverges)
{
  const ThinDomain dom(sphere(), as_example_profile(), 0.1);
  auto phi = [](const Vec3& x) { return std::exp(x(0)) * x(2) * x(2); };
  EXPECT_NEAR(integrate_volume(dom, phi, 16), integrate_volume(dom, phi), 1e-10);
}

TEST(ConstantExtension, SphereAgainstFiniteDifferences)
{
  const ClosestPointMap cp(sphere({8, 16, 2}));
  const QuadraticPolynomial eta = poly(0, Vec3(1, 0, 0));
  const Vec3 x = 1.2 * Vec3(std::cos(0.3), std::sin(0.3), 0.0);
  const ExtendedValue ev = constant_extension(cp, eta, x);
  const double h = 1e-5;
  for (int k = 0; k < 3; ++k) {
    Vec3 e = Vec3::Zero();
    e(k) = h;
    const double fd = ((x + e).normalized()(0) - (x - e).normalized()(0)) / (2 * h);
    EXPECT_NEAR(ev.gradient(k), fd, 1e-6);
  }
  EXPECT_NEAR(ev.value, std::cos(0.3), 1e-14);

  const ExtendedValue pole = constant_extension(cp, poly(0, Vec3(0, 0, 1)), Vec3(0, 0, 1.1));
  EXPECT_LT(pole.gradient.norm(), 1e-14);
}

TEST(ConstantExtension, ConstantAlongNormals)
{
  const auto s = std::make_shared<const Surface>(make_ellipsoid(1.0, 1.2, 0.8, {8, 16, 2}));
  const ClosestPointMap cp(s);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const QuadraticPolynomial eta = random_quadratic(rng);
    const SurfaceFrame& f = s->node_frames()[k * 5];
    const Vec3 x = f.y + 0.1 * f.n;
    const ExtendedValue ev = constant_extension(cp, eta, x);
    EXPECT_NEAR(ev.value, eta.value(f.y), 1e-10);
    EXPECT_NEAR(ev.gradient.dot(f.n), 0.0, 1e-10);
    // finite differences through the projection
    for (int j = 0; j < 3; ++j) {
      Vec3 e = Vec3::Zero();
      e(j) = 1e-5;
      const double fd = (eta.value(cp.project(x + e).y) - eta.value(cp.project(x - e).y)) / 2e-5;
      EXPECT_NEAR(ev.gradient(j), fd, 1e-6);
    }
  }
}

TEST(NormalExtension, GradientFormula)
{
  const ClosestPointMap cp(sphere({8, 16, 2}));
  const Vec3 x(0.2, 0.9, 0.5);
  const ExtendedNormal en = normal_extension(cp, x);
  EXPECT_LT((en.n - x.normalized()).norm(), 1e-14);
  // grad(x / |x|) = (I - n n) / |x|
  const Mat3 want = (Mat3::Identity() - en.n * en.n.transpose()) / x.norm();
  EXPECT_LT((en.gradient - want).norm(), 1e-12);
}

TEST(ThinDomain, WithEpsRescalesNodes)
{
  const ThinDomain a(sphere({8, 16, 2}), shell_profile(), 0.1);
  const ThinDomain b = a.with_eps(0.05);
  EXPECT_EQ(b.eps(), 0.05);
  EXPECT_NEAR(integrate_volume(b, [](const Vec3&) { return 1.0; }),
              4 * pi * (std::pow(1.05, 3) - 1.0) / 3, 1e-10);
}
