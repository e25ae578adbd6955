#pragma once

#include "ctd/types.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ctd {

// Parametrization value and partials up to second order.
struct ChartJet {
  Vec3 x;
  Vec3 d1, d2;
  Vec3 d11, d12, d22;
};

struct Chart {
  std::function<ChartJet(const Vec2&)> jet;
  Vec2 lo = Vec2::Zero();
  Vec2 hi = Vec2::Ones();
  std::array<bool, 2> periodic{false, false};
  // +1 when d1 x d2 points outward, -1 otherwise.
  double orientation = 1.0;
};

struct SurfaceFrame {
  int chart = 0;
  Vec2 s = Vec2::Zero();
  Vec3 y, t1, t2, n;
  Mat2 theta, theta_inv;
  double det_theta = 0.0;
  Mat2 II;
  // derivative of the unit normal along each chart parameter
  std::array<Vec3, 2> dn;
  Mat3 W;
  double kappa1 = 0.0, kappa2 = 0.0, H = 0.0;
  Mat3 P, Q;
  double symmetry_defect = 0.0;
};

struct Resolution {
  int n1 = 64;
  int n2 = 128;
  int nr = 8;
};

struct SurfaceNode {
  int chart = 0;
  Vec2 s;
  double weight = 0.0;       // includes sqrt(det theta)
  double param_weight = 0.0; // tensor weight in parameter space only
};

enum class SurfaceKind { Sphere, Torus, Revolution, Ellipsoid };

const char* to_string(SurfaceKind kind);

class Surface {
public:
  Surface(std::string name, SurfaceKind kind, std::vector<double> params,
          std::vector<Chart> charts, Resolution resolution,
          std::optional<double> reach_override = std::nullopt);

  const std::string& name() const { return name_; }
  SurfaceKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  const std::vector<Chart>& charts() const { return charts_; }
  const Resolution& resolution() const { return resolution_; }

  SurfaceFrame frame_at(int chart, const Vec2& s) const;

  const std::vector<SurfaceNode>& nodes() const { return nodes_; }
  const std::vector<SurfaceFrame>& node_frames() const { return frames_; }

  // Tube radius on which the closest point map is used.
  double reach() const { return reach_; }
  double max_abs_curvature() const { return max_kappa_; }

  // Same geometry, different quadrature.
  Surface with_resolution(Resolution resolution) const;

  Vec2 wrap(int chart, const Vec2& s) const;

private:
  std::string name_;
  SurfaceKind kind_;
  std::vector<double> params_;
  std::vector<Chart> charts_;
  Resolution resolution_;
  std::optional<double> reach_override_;
  std::vector<SurfaceNode> nodes_;
  std::vector<SurfaceFrame> frames_;
  double reach_ = 0.0;
  double max_kappa_ = 0.0;
};

// sum_{ij} theta^{ij} d_i eta d_j mu
Vec3 tangential_gradient(const SurfaceFrame& f, const Vec2& deta);
// P grad(eta~) for an ambient extension
Vec3 tangential_gradient_ambient(const SurfaceFrame& f, const Vec3& grad);
// (grad_G F)(k, l) = sum theta^{ab} (t_b)_k (d_a F)_l
Mat3 tangential_jacobian(const SurfaceFrame& f, const Vec3& dF1, const Vec3& dF2);
// Divergence of a tangential field given its chart partials.
double surface_divergence(const SurfaceFrame& f, const Vec3& X, const Vec3& dX1, const Vec3& dX2);
// Second tangential derivatives D_i D_j eta of the restriction of an ambient scalar.
Mat3 tangential_hessian(const SurfaceFrame& f, const Vec3& grad, const Mat3& hess);

double integrate_surface(const Surface& surface,
                         const std::function<double(const SurfaceFrame&)>& f);

// Orthonormal tangent pair with tau1 x tau2 = n.
std::pair<Vec3, Vec3> local_frame(const SurfaceFrame& f);

// Preset surfaces.
Surface make_sphere(Resolution res = {}, std::optional<double> reach = std::nullopt);
Surface make_torus(double R, double a, Resolution res = {});
Surface make_ellipsoid(double a, double b, double c, Resolution res = {});

// Meridian profile s -> (phi(s), psi(s)) with phi > 0 on (s0, s1) and
// phi(s0) = phi(s1) = 0; the surface is (phi cos t, phi sin t, psi).
struct MeridianProfile {
  std::function<std::array<double, 3>(double)> phi; // value, first, second derivative
  std::function<std::array<double, 3>(double)> psi;
  double s0 = 0.0, s1 = 1.0;
};
Surface make_revolution(const MeridianProfile& profile, Resolution res = {},
                        std::vector<double> params = {});
// Radial revolution surface r(t) = 1 + b cos^2(t) in polar angle t.
Surface make_bumped_revolution(double b, Resolution res = {});

} // namespace ctd
