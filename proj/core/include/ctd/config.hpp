#pragma once

#include "ctd/korn.hpp"

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace ctd {

struct SurfaceSpec {
  std::string kind = "sphere";
  std::vector<double> params;
  std::string label() const;
};

struct RunConfig {
  SurfaceSpec surface;
  std::string profile_text = "shell";
  ProfilePair profile = shell_profile();
  std::vector<double> eps;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double nu = 1.0;
  std::string experiment;
  Resolution resolution;
  std::uint64_t seed = 1;
  std::string out = "out";

  int samples = 100;
  long monte_carlo = 1'000'000;
  Orthogonality orthogonality = Orthogonality::AgainstReps;
  double beta = 0.5;
  int degree = 4;
  Vec3 killing = Vec3(1.0, 0.0, 0.0);
};

const std::vector<std::string>& experiment_names();

// "g0 = 1*y3; g1 = 2 + 1*y2" or a named profile
ProfilePair parse_profile(const std::string& text, int line = 0);
QuadraticPolynomial parse_polynomial(const std::string& text, int line = 0);
Resolution parse_resolution(const std::string& text, int line = 0);
SurfaceSpec parse_surface(const std::string& text, int line = 0);

// Parses "key = value" lines; '#' starts a comment. Throws ParseError.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

std::shared_ptr<const Surface> build_surface(const SurfaceSpec& spec, Resolution res);

// Semantic checks; throws ValidationError naming the offending key.
void validate(const RunConfig& cfg);

} // namespace ctd
