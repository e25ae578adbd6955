#include "ctd/quadrature.hpp"

#include "ctd/errors.hpp"

#include <cmath>
#include <numbers>

namespace ctd {

Rule1D gauss_legendre(int n, double a, double b)
{
  if (n < 1)
    throw Error(ErrorCode::NonFiniteInput, "Gauss-Legendre rule needs at least one node");
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

Rule1D periodic_trapezoid(int n, double a, double b)
{
  if (n < 1)
    throw Error(ErrorCode::NonFiniteInput, "periodic rule needs at least one node");
  Rule1D rule;
  const double h = (b - a) / n;
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(a + i * h);
    rule.weights.push_back(h);
  }
  return rule;
}

} // namespace ctd
