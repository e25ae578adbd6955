#pragma once

#include "ctd/polynomial.hpp"
#include "ctd/surface.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ctd {

struct ClosestPoint {
  int chart = 0;
  Vec2 s;
  Vec3 y;
  double d = 0.0;
  int iterations = 0;
};

// Projection onto the surface along normals. Closed form on the sphere and
// the torus, damped Newton in chart parameters elsewhere.
class ClosestPointMap {
public:
  explicit ClosestPointMap(std::shared_ptr<const Surface> surface);
  ClosestPoint project(const Vec3& x) const;
  const Surface& surface() const { return *surface_; }

private:
  ClosestPoint newton(const Vec3& x) const;

  std::shared_ptr<const Surface> surface_;
  std::vector<std::pair<int, Vec2>> seeds_;
  std::vector<Vec3> seed_points_;
};

struct ProfilePair {
  std::string name;
  QuadraticPolynomial g0, g1;
  const QuadraticPolynomial& operator[](int i) const { return i == 0 ? g0 : g1; }
};

ProfilePair shell_profile();       // g0 = 0, g1 = 1
ProfilePair as_example_profile();  // g0 = y3^2, g1 = y3^2 + 1
ProfilePair nas_example_profile(); // g0 = y3, g1 = y2 + 2

struct BoundaryFrame {
  int side = 0;
  Vec3 x;
  Vec3 tau;
  Vec3 n_eps;
  Mat3 P_eps, Q_eps;
  double area_factor = 0.0;
  std::optional<Mat3> W_eps;
  std::optional<double> H_eps;
};

struct VolumeNode {
  Vec3 x;
  double weight = 0.0;
  int node = 0; // surface node index
  double r = 0.0;
};

struct BoundaryNode {
  Vec3 x;
  double weight = 0.0;
  int node = 0;
  Vec3 n_eps;
};

class ThinDomain {
public:
  ThinDomain(std::shared_ptr<const Surface> surface, ProfilePair profiles, double eps,
             double gamma0 = 0.0, double gamma1 = 0.0, double nu = 1.0);

  const Surface& surface() const { return *surface_; }
  std::shared_ptr<const Surface> surface_ptr() const { return surface_; }
  const ProfilePair& profiles() const { return profiles_; }
  const QuadraticPolynomial& g(int i) const { return profiles_[i]; }
  double eps() const { return eps_; }
  double gamma(int i) const { return i == 0 ? gamma0_ : gamma1_; }
  double nu() const { return nu_; }
  double min_thickness() const { return min_g_; }
  const ClosestPointMap& cpmap() const { return *cpmap_; }

  ThinDomain with_eps(double eps) const;

  const std::vector<VolumeNode>& volume_nodes() const { return volume_; }
  const std::vector<BoundaryNode>& boundary_nodes(int i) const { return boundary_[i]; }

private:
  std::shared_ptr<const Surface> surface_;
  ProfilePair profiles_;
  double eps_, gamma0_, gamma1_, nu_;
  double min_g_ = 0.0;
  std::shared_ptr<const ClosestPointMap> cpmap_;
  std::vector<VolumeNode> volume_;
  std::vector<BoundaryNode> boundary_[2];
};

// det(I - r W) = (1 - r k1)(1 - r k2); throws OutOfTube for |r| >= reach.
double jacobian(const SurfaceFrame& f, double r, double reach);

BoundaryFrame boundary_frame(const ThinDomain& dom, int i, const SurfaceFrame& f,
                             bool with_curvature = false);

// Unit normal of the parametrized surface y + h(y) n(y) given grad_G h.
Vec3 parametrized_normal(const SurfaceFrame& f, double h, const Vec3& grad_h);

// -(I - n^i (x) n^i) grad(n^i o pi) at the point with closest point frame f and distance d.
Mat3 extended_weingarten(const ThinDomain& dom, int i, const SurfaceFrame& f, double d);

struct BoundaryCurvature {
  Mat3 W;
  double H = 0.0;
  double symmetry_defect = 0.0;
};
BoundaryCurvature boundary_weingarten(const ThinDomain& dom, int i, const Vec3& x);

double integrate_volume(const ThinDomain& dom, const std::function<double(const Vec3&)>& phi);
double integrate_volume(const ThinDomain& dom, const std::function<double(const Vec3&)>& phi,
                        int radial_nodes);
double integrate_boundary(const ThinDomain& dom, int i,
                          const std::function<double(const BoundaryNode&)>& phi);

struct ExtendedValue {
  double value = 0.0;
  Vec3 gradient;
};
// eta(pi(x)) and its gradient (I - d W)^{-1} grad_G eta for eta given by an
// ambient polynomial restricted to the surface.
ExtendedValue constant_extension(const ClosestPointMap& cp, const QuadraticPolynomial& eta,
                                 const Vec3& x);

struct ExtendedNormal {
  Vec3 n;
  Mat3 gradient; // -(I - d W)^{-1} W
  ClosestPoint cp;
  SurfaceFrame frame;
};
ExtendedNormal normal_extension(const ClosestPointMap& cp, const Vec3& x);

} // namespace ctd
