#pragma once

#include <vector>

namespace ctd {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule with n nodes on [a, b].
Rule1D gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Uniform rule for a periodic parameter on [a, b); the endpoint b is excluded.
Rule1D periodic_trapezoid(int n, double a, double b);

} // namespace ctd
