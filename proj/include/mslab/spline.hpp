#pragma once

#include <vector>

namespace mslab {

// Periodic cubic spline on the uniform grid s_i = i/m of the unit torus.
class PeriodicSpline {
 public:
  PeriodicSpline() = default;
  explicit PeriodicSpline(std::vector<double> values);

  double value(double s) const;
  double deriv(double s) const;
  double deriv2(double s) const;
  int size() const { return static_cast<int>(y_.size()); }

 private:
  void locate(double s, int& i, double& u) const;
  std::vector<double> y_, m_;  // values and second derivatives at the knots
  double h_ = 0.0;
};

}  // namespace mslab
