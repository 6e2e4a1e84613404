#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace mslab {

// Composite Simpson rule on a uniform grid; requires an even interval count.
// Falls back to trapezoid on the final interval when the count is odd.
double simpson(const std::vector<double>& f, double h);

double trapz(const std::vector<double>& f, double h);

// Cumulative trapezoid, F[0] = 0.
std::vector<double> cumtrapz(const std::vector<double>& f, double h);

// 4th order central first derivative of tabulated values (one-sided 4th order
// stencils at the edges).
std::vector<double> deriv4(const std::vector<double>& f, double h);

// Degree-5 (6 point) Lagrange interpolation of a uniformly tabulated function,
// clamped to the end values outside the table.
class UniformTable {
 public:
  UniformTable() = default;
  UniformTable(double x0, double h, std::vector<double> values)
      : x0_(x0), h_(h), v_(std::move(values)) {}

  double operator()(double x) const;
  bool empty() const { return v_.empty(); }
  const std::vector<double>& values() const { return v_; }

 private:
  double x0_ = 0.0, h_ = 1.0;
  std::vector<double> v_;
};

// Centered finite differences of a callable, 4th order.
double fd_deriv(const std::function<double(double)>& f, double x, double h);
double fd_deriv2(const std::function<double(double)>& f, double x, double h);

constexpr double kPi = 3.14159265358979323846;

}  // namespace mslab
