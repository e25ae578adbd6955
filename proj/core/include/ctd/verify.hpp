#pragma once

#include "ctd/korn.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ctd {

struct Check {
  std::string name;
  double max = 0.0;
  double mean = 0.0;
  int count = 0;
  bool pass = false;
  std::string criterion; // human readable acceptance rule
  std::optional<double> slope;
};

// Raw per-eps (or per-suite) values, for tabular output.
struct Measurement {
  std::optional<double> eps;
  std::string quantity;
  double value = 0.0;
};

struct ResidualReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::vector<Measurement> values;

  bool pass() const;
  const Check* find(const std::string& name) const;
};

// Residual statistics over a sample, passing when max <= tol.
Check residual_check(const std::string& name, const std::vector<double>& residuals, double tol);

// Pointwise Gauss formula, normal derivative, shear and covariant frame
// identities on random polynomial tangent fields.
ResidualReport identity_suite(const Surface& surface, int samples, std::uint64_t seed);

struct CovOptions {
  long monte_carlo_samples = 10'000'000;
  bool monte_carlo = true;
};

// Change of variables: volume, boundary area and the analytic shell volume.
ResidualReport cov_suite(const ThinDomain& dom, std::uint64_t seed, const CovOptions& opts = {});

// Boundary geometry against middle surface geometry over a decreasing eps family.
ResidualReport comparison_suite(const std::vector<ThinDomain>& family, std::uint64_t seed);

// Poincare, trace, gradient Korn, G bound and coercivity constants over an eps family.
ResidualReport inequality_suite(const std::vector<ThinDomain>& family, std::uint64_t seed);

// Slope of the fit with a degenerate-exact fallback when every value vanishes.
Check slope_check(const std::string& name, const std::vector<double>& eps,
                  const std::vector<double>& values, double lo, double hi);

// Passes when max / min over the values stays below factor.
Check uniformity_check(const std::string& name, const std::vector<double>& values, double factor);

} // namespace ctd
