#include "ctd/polynomial.hpp"

#include <cmath>
#include <sstream>

namespace ctd {

void QuadraticPolynomial::add_quadratic(int i, int j, double v)
{
  if (i == j) {
    q_(i, i) += v;
  } else {
    q_(i, j) += 0.5 * v;
    q_(j, i) += 0.5 * v;
  }
}

std::string QuadraticPolynomial::to_string() const
{
  std::ostringstream os;
  os.precision(17);
  os << c_;
  for (int i = 0; i < 3; ++i)
    if (l_(i) != 0.0)
      os << " + " << l_(i) << "*y" << (i + 1);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const double v = (i == j) ? q_(i, i) : 2.0 * q_(i, j);
      if (v != 0.0)
        os << " + " << v << "*y" << (i + 1) << "*y" << (j + 1);
    }
  return os.str();
}

QuadraticPolynomial random_quadratic(std::mt19937_64& rng, int degree, double scale)
{
  std::uniform_real_distribution<double> u(-scale, scale);
  QuadraticPolynomial p(u(rng));
  if (degree >= 1)
    for (int i = 0; i < 3; ++i)
      p.add_linear(i, u(rng));
  if (degree >= 2)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j)
        p.add_quadratic(i, j, u(rng));
  return p;
}

QuadraticVectorField random_quadratic_field(std::mt19937_64& rng, int degree, double scale)
{
  QuadraticVectorField f;
  for (auto& comp : f.c)
    comp = random_quadratic(rng, degree, scale);
  return f;
}

} // namespace ctd
