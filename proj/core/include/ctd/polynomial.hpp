#pragma once

#include "ctd/types.hpp"

#include <random>
#include <string>

namespace ctd {

// c + l . x + x^T Q x with Q symmetric.
class QuadraticPolynomial {
public:
  QuadraticPolynomial() = default;
  explicit QuadraticPolynomial(double c) : c_(c) {}
  QuadraticPolynomial(double c, const Vec3& l, const Mat3& q) : c_(c), l_(l), q_(sym(q)) {}

  double value(const Vec3& x) const { return c_ + l_.dot(x) + x.dot(q_ * x); }
  Vec3 gradient(const Vec3& x) const { return l_ + 2.0 * q_ * x; }
  Mat3 hessian() const { return 2.0 * q_; }

  double constant() const { return c_; }
  const Vec3& linear() const { return l_; }
  const Mat3& quadratic() const { return q_; }

  void add_constant(double v) { c_ += v; }
  void add_linear(int i, double v) { l_(i) += v; }
  // adds v * x_i * x_j
  void add_quadratic(int i, int j, double v);

  bool is_constant() const { return l_.isZero(0.0) && q_.isZero(0.0); }

  QuadraticPolynomial operator+(const QuadraticPolynomial& o) const
  {
    return {c_ + o.c_, l_ + o.l_, q_ + o.q_};
  }

  std::string to_string() const;

private:
  double c_ = 0.0;
  Vec3 l_ = Vec3::Zero();
  Mat3 q_ = Mat3::Zero();
};

// Vector field with quadratic polynomial components.
struct QuadraticVectorField {
  QuadraticPolynomial c[3];

  Vec3 value(const Vec3& x) const { return {c[0].value(x), c[1].value(x), c[2].value(x)}; }
  // (grad u)(i, j) = d_i u_j
  Mat3 jacobian(const Vec3& x) const
  {
    Mat3 g;
    for (int j = 0; j < 3; ++j)
      g.col(j) = c[j].gradient(x);
    return g;
  }
};

QuadraticPolynomial random_quadratic(std::mt19937_64& rng, int degree = 2, double scale = 1.0);
QuadraticVectorField random_quadratic_field(std::mt19937_64& rng, int degree = 2, double scale = 1.0);

} // namespace ctd
