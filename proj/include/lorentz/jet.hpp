#pragma once

#include "lorentz/linalg.hpp"

namespace lorentz {

/// Second-order jet of a scalar at a point: value, gradient and Hessian.
/// All arithmetic propagates the three parts together (forward mode).
struct Jet2 {
  double value = 0.0;
  Vec gradient;
  Mat hessian;  // kept exactly symmetric

  Jet2() = default;
  Jet2(double v, Vec g, Mat h);

  int dim() const { return static_cast<int>(gradient.size()); }

  static Jet2 constant(int n, double v);
  /// The coordinate function x^i itself.
  static Jet2 variable(int n, int i, double v);
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(double s, const Jet2& a);
Jet2 operator+(double s, const Jet2& a);

/// f(a) given f(a.value), f'(a.value), f''(a.value).
Jet2 chain(const Jet2& a, double f0, double f1, double f2);

Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 tan(const Jet2& a);
Jet2 sinh(const Jet2& a);
Jet2 cosh(const Jet2& a);
Jet2 tanh(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 pow_int(const Jet2& a, long k);
Jet2 pow_real(const Jet2& a, const Jet2& b);

}  // namespace lorentz
