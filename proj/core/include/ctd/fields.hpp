#pragma once

#include "ctd/thin_domain.hpp"

#include <functional>
#include <string>

namespace ctd {

enum class Provenance { Analytic, ClosedForm, FiniteDifference };

const char* to_string(Provenance p);

// Central differences with step h (default 1e-5 (1 + |x|)).
Mat3 fd_jacobian(const std::function<Vec3(const Vec3&)>& f, const Vec3& x, double h = 0.0);

struct AmbientVectorField {
  std::function<Vec3(const Vec3&)> eval;
  std::function<Mat3(const Vec3&)> jac; // empty means finite differences
  std::string tag;
  Provenance provenance = Provenance::Analytic;

  Vec3 operator()(const Vec3& x) const { return eval(x); }
  Mat3 jacobian(const Vec3& x) const { return jac ? jac(x) : fd_jacobian(eval, x); }
};

// w(x) = a x x + b
struct RigidField {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();

  Vec3 operator()(const Vec3& x) const { return a.cross(x) + b; }
  AmbientVectorField field(std::string tag = "rigid") const;
};

AmbientVectorField polynomial_field(const QuadraticVectorField& p, std::string tag = "polynomial");

Mat3 strain_rate(const AmbientVectorField& u, const Vec3& x);

// P sym(P grad v~) P at a surface point, from the ambient Jacobian of an extension.
Mat3 surface_strain(const SurfaceFrame& f, const Mat3& ambient_jacobian);

// ||D_G(v)||_{L2(G)} / ||v||_{L2(G)}
double killing_ratio(const Surface& surface, const AmbientVectorField& v);

// Extension (I - d W)v + eps (v . grad_G g0) n of a tangential Killing field
// v in K_g. Closed form with analytic Jacobian for rotations on the sphere.
AmbientVectorField counterexample_field(const ThinDomain& dom, const RigidField& v);
AmbientVectorField counterexample_field_general(const ThinDomain& dom, const AmbientVectorField& v);

// G(u) = 2 n1~ x W~ u + n2~ x u
Vec3 g_field_value(const ThinDomain& dom, const Vec3& x, const Vec3& u);
AmbientVectorField g_field(const ThinDomain& dom, const AmbientVectorField& u);

} // namespace ctd
