#pragma once

#include "ctd/fields.hpp"

#include <cstdint>
#include <vector>

namespace ctd {

struct RigidAxis {
  bool is_translation = false;
  Vec3 direction; // unit rotation axis, or translation direction
  Vec3 point;     // a x b / |a|^2, the axis point closest to the origin
};

struct RigidBasisReport {
  int dimension = 0;
  std::vector<double> singular_values; // descending
  // smallest kept singular value over the largest discarded one; with nothing
  // discarded the rank threshold stands in for the denominator
  double gap = 0.0;
  bool well_separated = false;
  std::vector<RigidField> basis;
  std::vector<RigidAxis> axes;
  int samples = 0;
};

inline constexpr double rank_tolerance = 1e-8;
inline constexpr double min_gap = 1e4;

// Null space of the rows [p x m, m] weighted by sqrt(w): rigid fields a x x + b
// with (a x p + b) . m = 0.
RigidBasisReport rigid_null_space(const MatX& rows);

RigidAxis rigid_axis(const RigidField& w);

// Rigid fields tangent to the surface, optionally also orthogonal to the
// tangential gradients of the given scalars.
RigidBasisReport fit_rigid_tangential(const Surface& surface,
                                      const std::vector<QuadraticPolynomial>& constraints = {});

struct EigenstructureReport {
  int checked = 0;
  int skipped = 0;
  double max_eigen_residual = 0.0; // |W w - lambda w|
  double max_axis_residual = 0.0;  // |a x n + lambda w|
  double max_residual() const { return std::max(max_eigen_residual, max_axis_residual); }
};

EigenstructureReport eigenstructure_check(const Surface& surface, const RigidField& w, int samples,
                                          std::uint64_t seed);

struct ThinSymmetryReport {
  RigidBasisReport boundary; // rigid fields tangent to both boundary components
  RigidBasisReport surface;  // R_0 and R_1 intersected on the middle surface
  bool agree = false;
};

ThinSymmetryReport thin_domain_symmetry(const ThinDomain& dom);

} // namespace ctd
