#pragma once

#include "ctd/fields.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ctd {

// Squared norms over the thin domain and its boundary.
struct NormReport {
  double l2 = 0.0;             // ||u||^2
  double grad = 0.0;           // ||grad u||^2
  double strain = 0.0;         // ||D(u)||^2
  double boundary[2] = {0, 0}; // ||u||^2 on each boundary component
  double impermeability = 0.0; // ||u . n_eps||^2 over the whole boundary
  double h1() const { return l2 + grad; }
};

NormReport norms(const ThinDomain& dom, const AmbientVectorField& u);
double l2_inner(const ThinDomain& dom, const AmbientVectorField& u, const AmbientVectorField& v);

// 2 nu (D u1, D u2) + sum_i gamma_i (u1, u2) on the boundary components
double bilinear_form(const ThinDomain& dom, const AmbientVectorField& u1,
                     const AmbientVectorField& u2);

// (||u||^2 + ||grad u||^2) / ||D u||^2
double rayleigh(const ThinDomain& dom, const AmbientVectorField& u);
double rayleigh(const NormReport& n);

enum class Orthogonality { None, AgainstReps, AgainstRg, AgainstKgExtension };

const char* to_string(Orthogonality m);

struct KornConfig {
  Orthogonality mode = Orthogonality::AgainstReps;
  double beta = 0.5;
  double impermeability_tol = 1e-6;
  int degree = 4;
  double penalty_scale = 1e-4; // eta = penalty_scale * eps
};

// Constraint fields for an orthogonality mode on a given domain.
std::vector<AmbientVectorField> constraint_fields(const ThinDomain& dom, Orthogonality mode);

// sup over the span of ws of |(u, w)| / (||u|| ||w||)
double max_alignment(const ThinDomain& dom, const AmbientVectorField& u,
                     const std::vector<AmbientVectorField>& ws);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

// Least squares fit of log(value) against log(eps).
ScalingFit fit_scaling(const std::vector<double>& eps, const std::vector<double>& values);

using FieldFamily = std::function<std::vector<AmbientVectorField>(const ThinDomain&)>;

struct SweepPoint {
  double eps = 0.0;
  double value = 0.0; // largest admissible Rayleigh quotient
  int admissible = 0;
  std::vector<std::string> rejections;
};

struct ScalingReport {
  std::vector<SweepPoint> points;
  ScalingFit fit;
};

ScalingReport korn_lower_bound_sweep(const std::vector<ThinDomain>& family, const FieldFamily& fields,
                                     const KornConfig& config);

struct EigenEstimate {
  double lambda_max = 0.0;
  int dimension = 0;
  int deflated = 0;
};

// Largest eigenvalue of M x = lambda A x over vector polynomials of total
// degree <= config.degree, restricted to the L2-orthogonal complement of the
// constraint fields selected by config.mode.
EigenEstimate korn_eigen_estimate(const ThinDomain& dom, const KornConfig& config);

} // namespace ctd
