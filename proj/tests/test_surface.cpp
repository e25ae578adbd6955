#include "ctd/errors.hpp"
#include "ctd/surface.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace ctd;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<Surface> all_surfaces()
{
  const Resolution r{24, 48, 4};
  std::vector<Surface> out;
  out.push_back(make_sphere(r));
  out.push_back(make_torus(2.0, 0.5, r));
  out.push_back(make_ellipsoid(1.0, 1.2, 0.8, r));
  out.push_back(make_bumped_revolution(0.3, r));
  return out;
}

// Principal curvatures from finite differences of the chart alone.
std::array<double, 2> fd_curvatures(const Surface& s, int chart, const Vec2& p, double orientation)
{
  const auto& jet = s.charts()[chart].jet;
  auto normal = [&](const Vec2& q) {
    const ChartJet j = jet(q);
    return Vec3(orientation * j.d1.cross(j.d2).normalized());
  };
  const double h = 1e-4;
  Eigen::Matrix<double, 3, 2> dmu, dn;
  for (int k = 0; k < 2; ++k) {
    Vec2 e = Vec2::Zero();
    e(k) = h;
    dmu.col(k) = k == 0 ? jet(p).d1 : jet(p).d2;
    dn.col(k) = (normal(p + e) - normal(p - e)) / (2 * h);
  }
  // shape operator in chart coordinates: -dn = dmu * S
  const Mat2 S = -(dmu.transpose() * dmu).inverse() * (dmu.transpose() * dn);
  Eigen::EigenSolver<Mat2> es(S);
  std::array<double, 2> k{es.eigenvalues()(0).real(), es.eigenvalues()(1).real()};
  std::sort(k.begin(), k.end());
  return k;
}

} // namespace

TEST(SurfaceFrame, SphereEquatorPoint)
{
  const Surface s = make_sphere();
  const SurfaceFrame f = s.frame_at(0, Vec2(pi / 2, 0.0));
  EXPECT_NEAR((f.y - Vec3(1, 0, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((f.n - Vec3(1, 0, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(f.det_theta, 1.0, 1e-14);
  EXPECT_NEAR(f.H, -2.0, 1e-12);
}

TEST(SurfaceFrame, SphereWeingartenIsMinusProjection)
{
  const Surface s = make_sphere();
  for (const auto& f : s.node_frames()) {
    EXPECT_LT((f.W + f.P).norm(), 1e-10);
    EXPECT_NEAR(f.kappa1, -1.0, 1e-10);
    EXPECT_NEAR(f.kappa2, -1.0, 1e-10);
    EXPECT_NEAR(f.H, -2.0, 1e-10);
  }
}

TEST(SurfaceFrame, TorusEquatorCurvatures)
{
  const Surface t = make_torus(2.0, 0.5);
  // outer equator: -1/a and -1/(R + a); inner equator: -1/a and 1/(R - a)
  const SurfaceFrame outer = t.frame_at(0, Vec2(0.0, 0.3));
  std::array<double, 2> k{outer.kappa1, outer.kappa2};
  std::sort(k.begin(), k.end());
  EXPECT_NEAR(k[0], -2.0, 1e-10);
  EXPECT_NEAR(k[1], -0.4, 1e-10);

  const SurfaceFrame inner = t.frame_at(0, Vec2(pi, 1.1));
  k = {inner.kappa1, inner.kappa2};
  std::sort(k.begin(), k.end());
  EXPECT_NEAR(k[0], -2.0, 1e-10);
  EXPECT_NEAR(k[1], 1.0 / 1.5, 1e-10);
}

TEST(SurfaceFrame, CurvaturesMatchFiniteDifferenceOracle)
{
  std::mt19937_64 rng(7);
  for (const auto& s : all_surfaces()) {
    const Chart& ch = s.charts()[0];
    std::uniform_real_distribution<double> u1(ch.lo(0) + 0.2, ch.hi(0) - 0.2);
    std::uniform_real_distribution<double> u2(ch.lo(1), ch.hi(1));
    for (int k = 0; k < 10; ++k) {
      const Vec2 p(u1(rng), u2(rng));
      const SurfaceFrame f = s.frame_at(0, p);
      std::array<double, 2> got{f.kappa1, f.kappa2};
      std::sort(got.begin(), got.end());
      const auto want = fd_curvatures(s, 0, p, ch.orientation);
      EXPECT_NEAR(got[0], want[0], 1e-6) << s.name();
      EXPECT_NEAR(got[1], want[1], 1e-6) << s.name();
    }
  }
}

TEST(SurfaceFrame, TorusNormalPointsOutward)
{
  const Surface t = make_torus(2.0, 0.5, {16, 32, 4});
  for (const auto& f : t.node_frames()) {
    const Vec3 core = 2.0 * Vec3(f.y(0), f.y(1), 0.0).normalized();
    EXPECT_GT(f.n.dot(f.y - core), 0.49);
  }
}

TEST(SurfaceFrame, Invariants)
{
  for (const auto& s : all_surfaces()) {
    for (const auto& f : s.node_frames()) {
      EXPECT_NEAR(f.n.norm(), 1.0, 1e-12);
      EXPECT_LT((f.P * f.P - f.P).norm(), 1e-12);
      EXPECT_LT((f.P * f.Q).norm(), 1e-12);
      EXPECT_LT((f.P + f.Q - Mat3::Identity()).norm(), 1e-12);
      EXPECT_LT(f.symmetry_defect, 1e-9) << s.name();
      EXPECT_LT((f.W - f.W.transpose()).norm(), 1e-12);
      EXPECT_LT((f.W * f.n).norm(), 1e-10);
      EXPECT_LT((f.P * f.W - f.W).norm(), 1e-10);
      EXPECT_LT((f.W * f.P - f.W).norm(), 1e-10);
      EXPECT_NEAR(f.W.trace(), f.H, 1e-10);
      EXPECT_NEAR(f.kappa1 + f.kappa2, f.H, 1e-10);
      EXPECT_NEAR(f.t1.dot(f.n), 0.0, 1e-12);
      EXPECT_NEAR(f.t2.dot(f.n), 0.0, 1e-12);
    }
  }
}

TEST(SurfaceFrame, LocalFrameIsOrthonormalAndDiagonalizesTrace)
{
  for (const auto& s : all_surfaces()) {
    for (const auto& f : s.node_frames()) {
      const auto [a, b] = local_frame(f);
      EXPECT_NEAR(a.norm(), 1.0, 1e-12);
      EXPECT_NEAR(b.norm(), 1.0, 1e-12);
      EXPECT_NEAR(a.dot(b), 0.0, 1e-12);
      EXPECT_LT((a.cross(b) - f.n).norm(), 1e-12);
      EXPECT_NEAR(a.dot(f.W * a) + b.dot(f.W * b), f.H, 1e-10);
      EXPECT_NEAR(a.dot(f.W * b), b.dot(f.W * a), 1e-12);
    }
  }
}

TEST(SurfaceFrame, DegenerateAndNonFiniteInputs)
{
  const Surface s = make_sphere();
  try {
    s.frame_at(0, Vec2(0.0, 0.0));
    FAIL() << "pole accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateChart);
  }
  try {
    s.frame_at(0, Vec2(std::numeric_limits<double>::quiet_NaN(), 0.0));
    FAIL() << "NaN accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteInput);
  }
}

TEST(TangentialGradient, SphereHeight)
{
  const Surface s = make_sphere();
  for (const auto& f : s.node_frames()) {
    const ChartJet j = s.charts()[0].jet(f.s);
    const Vec3 chart = tangential_gradient(f, Vec2(j.d1(2), j.d2(2)));
    const Vec3 ambient = tangential_gradient_ambient(f, Vec3(0, 0, 1));
    const Vec3 exact = Vec3(0, 0, 1) - f.y(2) * f.y;
    EXPECT_LT((chart - exact).norm(), 1e-12);
    EXPECT_LT((ambient - exact).norm(), 1e-12);
  }
}

TEST(TangentialGradient, NearNorthPole)
{
  // eta = y2 - y3 + 2 has tangential gradient (0, 1, 0) at the pole
  const Surface s = make_sphere();
  const SurfaceFrame f = s.frame_at(0, Vec2(1e-5, 0.0));
  const Vec3 g = tangential_gradient_ambient(f, Vec3(0, 1, -1));
  EXPECT_LT((g - Vec3(0, 1, 0)).norm(), 1e-4);
}

TEST(SurfaceDivergence, SphereExamples)
{
  const Surface s = make_sphere();
  const Vec3 e3(0, 0, 1);
  for (const auto& f : s.node_frames()) {
    const ChartJet j = s.charts()[0].jet(f.s);
    // rotation about e3 is a Killing field
    const double rot = surface_divergence(f, e3.cross(f.y), e3.cross(j.d1), e3.cross(j.d2));
    EXPECT_NEAR(rot, 0.0, 1e-12);
    // P e3 = e3 - y3 y has divergence -2 y3 with outward normals
    const Vec3 X = e3 - f.y(2) * f.y;
    const Vec3 dX1 = -j.d1(2) * f.y - f.y(2) * j.d1;
    const Vec3 dX2 = -j.d2(2) * f.y - f.y(2) * j.d2;
    EXPECT_NEAR(surface_divergence(f, X, dX1, dX2), -2.0 * f.y(2), 1e-12);
  }
}

TEST(SurfaceDivergence, RejectsNormalComponent)
{
  const Surface s = make_sphere();
  const SurfaceFrame f = s.frame_at(0, Vec2(1.0, 2.0));
  try {
    surface_divergence(f, f.n, f.dn[0], f.dn[1]);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotTangential);
  }
}

TEST(Integration, SphereMoments)
{
  const Surface s = make_sphere();
  EXPECT_NEAR(integrate_surface(s, [](const SurfaceFrame&) { return 1.0; }), 4 * pi, 1e-10 * 4 * pi);
  EXPECT_NEAR(integrate_surface(s, [](const SurfaceFrame& f) { return f.y(2) * f.y(2); }),
              4 * pi / 3, 1e-10);
  EXPECT_NEAR(integrate_surface(s, [](const SurfaceFrame& f) { return f.y(2); }), 0.0, 1e-12);
}

TEST(Integration, TorusAreaAndEllipsoidArea)
{
  const Surface t = make_torus(2.0, 0.5);
  EXPECT_NEAR(integrate_surface(t, [](const SurfaceFrame&) { return 1.0; }), 4 * pi * pi * 2.0 * 0.5,
              1e-10);
  // area of an oblate spheroid, a = b = 1, c = 0.5
  const Surface e = make_ellipsoid(1.0, 1.0, 0.5);
  const double ecc = std::sqrt(1.0 - 0.25);
  const double exact = 2 * pi * (1.0 + 0.25 / ecc * std::atanh(ecc));
  EXPECT_NEAR(integrate_surface(e, [](const SurfaceFrame&) { return 1.0; }), exact, 1e-9);
}

TEST(Integration, RejectsNonFiniteIntegrand)
{
  const Surface s = make_sphere({8, 16, 2});
  try {
    integrate_surface(s, [](const SurfaceFrame&) { return std::numeric_limits<double>::infinity(); });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteInput);
  }
}

// Integration by parts: int div_G v = -int H v.n for ambient cubic fields.
TEST(Integration, DivergenceTheoremOnRandomCubics)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  // monomials of degree <= 3 in three variables
  std::vector<std::array<int, 3>> mono;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b)
      for (int c = 0; a + b + c <= 3; ++c)
        mono.push_back({a, b, c});

  for (const auto& s : all_surfaces()) {
    for (int trial = 0; trial < 20; ++trial) {
      MatX coef(3, mono.size());
      for (int i = 0; i < coef.size(); ++i)
        coef.data()[i] = u(rng);
      auto jac = [&](const Vec3& x) {
        Mat3 g = Mat3::Zero();
        for (std::size_t m = 0; m < mono.size(); ++m) {
          const auto& e = mono[m];
          for (int i = 0; i < 3; ++i) {
            if (e[i] == 0)
              continue;
            auto p = e;
            p[i] -= 1;
            const double d = e[i] * std::pow(x(0), p[0]) * std::pow(x(1), p[1]) * std::pow(x(2), p[2]);
            for (int j = 0; j < 3; ++j)
              g(i, j) += coef(j, m) * d;
          }
        }
        return g;
      };
      auto val = [&](const Vec3& x) {
        Vec3 v = Vec3::Zero();
        for (std::size_t m = 0; m < mono.size(); ++m) {
          const auto& e = mono[m];
          const double t = std::pow(x(0), e[0]) * std::pow(x(1), e[1]) * std::pow(x(2), e[2]);
          v += coef.col(m) * t;
        }
        return v;
      };
      const double lhs = integrate_surface(s, [&](const SurfaceFrame& f) {
        return (f.P * jac(f.y).transpose()).trace() + f.H * val(f.y).dot(f.n);
      });
      const double scale = integrate_surface(s, [&](const SurfaceFrame& f) { return val(f.y).norm(); });
      EXPECT_LT(std::abs(lhs), 1e-8 * std::max(1.0, scale)) << s.name();
    }
  }
}

TEST(Resolvent, InvertibleInsideReach)
{
  for (const auto& s : all_surfaces()) {
    const double r = 0.9 * s.reach();
    for (const auto& f : s.node_frames()) {
      for (double d : {-r, r}) {
        const Mat3 R = Mat3::Identity() - d * f.W;
        EXPECT_GT(R.determinant(), 0.0);
        EXPECT_LT(R.inverse().norm(), 1e3);
      }
    }
  }
}

TEST(Surface, ReachFromCurvature)
{
  EXPECT_NEAR(make_sphere().reach(), 0.9, 0.0);
  EXPECT_NEAR(make_torus(2.0, 0.5).reach(), 0.25, 1e-12);
}

TEST(Surface, WithResolutionKeepsGeometry)
{
  const Surface a = make_ellipsoid(1.0, 1.2, 0.8, {16, 32, 4});
  const Surface b = a.with_resolution({32, 64, 4});
  EXPECT_EQ(b.nodes().size(), 32u * 64u);
  const SurfaceFrame fa = a.frame_at(0, Vec2(0.7, 1.3));
  const SurfaceFrame fb = b.frame_at(0, Vec2(0.7, 1.3));
  EXPECT_LT((fa.W - fb.W).norm(), 1e-15);
}
