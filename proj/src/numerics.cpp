#include "mslab/numerics.hpp"

#include <algorithm>

namespace mslab {

double simpson(const std::vector<double>& f, double h) {
  const size_t n = f.size();
  if (n < 2) return 0.0;
  const size_t m = (n - 1) % 2 == 0 ? n : n - 1;  // last node of the Simpson part
  double s = 0.0;
  if (m >= 3) {
    s = f[0] + f[m - 1];
    for (size_t i = 1; i + 1 < m; i += 2) s += 4.0 * f[i];
    for (size_t i = 2; i + 1 < m; i += 2) s += 2.0 * f[i];
    s *= h / 3.0;
  }
  if (m != n) s += 0.5 * h * (f[n - 2] + f[n - 1]);
  return s;
}

double trapz(const std::vector<double>& f, double h) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

std::vector<double> cumtrapz(const std::vector<double>& f, double h) {
  std::vector<double> out(f.size(), 0.0);
  for (size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  return out;
}

std::vector<double> deriv4(const std::vector<double>& f, double h) {
  const int n = static_cast<int>(f.size());
  std::vector<double> d(n, 0.0);
  auto at = [&](int i) { return f[i]; };
  for (int i = 2; i < n - 2; ++i)
    d[i] = (-at(i + 2) + 8 * at(i + 1) - 8 * at(i - 1) + at(i - 2)) / (12 * h);
  if (n >= 5) {
    // one-sided 4th order stencils
    d[0] = (-25 * at(0) + 48 * at(1) - 36 * at(2) + 16 * at(3) - 3 * at(4)) / (12 * h);
    d[1] = (-3 * at(0) - 10 * at(1) + 18 * at(2) - 6 * at(3) + at(4)) / (12 * h);
    d[n - 1] = (25 * at(n - 1) - 48 * at(n - 2) + 36 * at(n - 3) - 16 * at(n - 4) + 3 * at(n - 5)) /
               (12 * h);
    d[n - 2] =
        (3 * at(n - 1) + 10 * at(n - 2) - 18 * at(n - 3) + 6 * at(n - 4) - at(n - 5)) / (12 * h);
  }
  return d;
}

double UniformTable::operator()(double x) const {
  const int n = static_cast<int>(v_.size());
  if (n == 0) return 0.0;
  if (n < 6) {
    // linear fallback for tiny tables
    double u = (x - x0_) / h_;
    int i = std::clamp(static_cast<int>(std::floor(u)), 0, n - 2);
    double t = u - i;
    if (t < 0) t = 0;
    if (t > 1) t = 1;
    return v_[i] * (1 - t) + v_[i + 1] * t;
  }
  const double u = (x - x0_) / h_;
  if (u <= 0.0) return v_.front();
  if (u >= n - 1) return v_.back();
  int i0 = static_cast<int>(std::floor(u)) - 2;
  i0 = std::clamp(i0, 0, n - 6);
  // 6-point Lagrange around x
  double result = 0.0;
  for (int k = 0; k < 6; ++k) {
    double w = 1.0;
    for (int j = 0; j < 6; ++j) {
      if (j == k) continue;
      w *= (u - (i0 + j)) / static_cast<double>(k - j);
    }
    result += w * v_[i0 + k];
  }
  return result;
}

double fd_deriv(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

double fd_deriv2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

}  // namespace mslab
