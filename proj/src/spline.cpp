#include "mslab/spline.hpp"

#include <cmath>

#include "mslab/error.hpp"
#include "mslab/linalg.hpp"

namespace mslab {

namespace {

// Cyclic tridiagonal solve (constant coefficients a x_{i-1} + b x_i + a x_{i+1}
// with wraparound) via Sherman-Morrison.
std::vector<double> cyclic_solve(double a, double b, std::vector<double> r) {
  const int n = static_cast<int>(r.size());
  const double gamma = -b;
  std::vector<double> lo(n, a), di(n, b), up(n, a), u(n, 0.0);
  di[0] = b - gamma;
  di[n - 1] = b - a * a / gamma;
  u[0] = gamma;
  u[n - 1] = a;
  auto y = tridiag_solve(lo, di, up, r);
  auto z = tridiag_solve(std::move(lo), std::move(di), std::move(up), std::move(u));
  const double vy = y[0] + (a / gamma) * y[n - 1];
  const double vz = 1.0 + z[0] + (a / gamma) * z[n - 1];
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = y[i] - z[i] * vy / vz;
  return x;
}

}  // namespace

PeriodicSpline::PeriodicSpline(std::vector<double> values) : y_(std::move(values)) {
  const int m = static_cast<int>(y_.size());
  if (m < 4) throw NumericalError("PeriodicSpline: need at least 4 knots");
  h_ = 1.0 / m;
  std::vector<double> rhs(m);
  for (int i = 0; i < m; ++i) {
    const double yp = y_[(i + 1) % m], ym = y_[(i - 1 + m) % m];
    rhs[i] = 6.0 * (ym - 2.0 * y_[i] + yp) / (h_ * h_);
  }
  m_ = cyclic_solve(1.0, 4.0, std::move(rhs));
}

void PeriodicSpline::locate(double s, int& i, double& u) const {
  const int m = size();
  s -= std::floor(s);  // wrap to [0,1)
  double q = s / h_;
  i = static_cast<int>(std::floor(q));
  if (i >= m) i = m - 1;
  u = s - i * h_;
}

double PeriodicSpline::value(double s) const {
  int i;
  double u;
  locate(s, i, u);
  const int m = size();
  const double a = h_ - u, b = u;
  const double yi = y_[i], yj = y_[(i + 1) % m];
  const double mi = m_[i], mj = m_[(i + 1) % m];
  return mi * a * a * a / (6 * h_) + mj * b * b * b / (6 * h_) + (yi / h_ - mi * h_ / 6) * a +
         (yj / h_ - mj * h_ / 6) * b;
}

double PeriodicSpline::deriv(double s) const {
  int i;
  double u;
  locate(s, i, u);
  const int m = size();
  const double a = h_ - u, b = u;
  const double yi = y_[i], yj = y_[(i + 1) % m];
  const double mi = m_[i], mj = m_[(i + 1) % m];
  return -mi * a * a / (2 * h_) + mj * b * b / (2 * h_) - (yi / h_ - mi * h_ / 6) +
         (yj / h_ - mj * h_ / 6);
}

double PeriodicSpline::deriv2(double s) const {
  int i;
  double u;
  locate(s, i, u);
  const int m = size();
  return m_[i] * (h_ - u) / h_ + m_[(i + 1) % m] * u / h_;
}

}  // namespace mslab
