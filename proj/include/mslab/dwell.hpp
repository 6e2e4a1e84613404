#pragma once

#include "mslab/error.hpp"

namespace mslab {

// Quartic double well f(s) = (beta/4)(s^2-1)^2. Minima at +-1 with
// f(+-1) = f'(+-1) = 0, f''(+-1) = 2 beta > 0, f symmetric, f'''' = 6 beta.
struct DoubleWell {
  double beta = 1.0;

  explicit DoubleWell(double b = 1.0) : beta(b) {
    if (!(beta > 0.0)) throw NumericalError("DoubleWell: beta must be positive");
  }

  double f(double s) const {
    const double q = s * s - 1.0;
    return 0.25 * beta * q * q;
  }
  double df(double s) const { return beta * s * (s * s - 1.0); }
  double d2f(double s) const { return beta * (3.0 * s * s - 1.0); }
  double d3f(double s) const { return 6.0 * beta * s; }
  double d4f() const { return 6.0 * beta; }  // k_f
};

}  // namespace mslab
