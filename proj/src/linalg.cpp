#include "mslab/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "mslab/error.hpp"

namespace mslab {

std::vector<double> tridiag_solve(std::vector<double> lo, std::vector<double> di,
                                  std::vector<double> up, std::vector<double> rhs) {
  const int n = static_cast<int>(di.size());
  std::vector<double> up2(n, 0.0);  // second superdiagonal fill from row swaps
  for (int i = 0; i < n - 1; ++i) {
    if (std::abs(lo[i + 1]) > std::abs(di[i])) {
      std::swap(di[i], lo[i + 1]);
      std::swap(up[i], di[i + 1]);
      if (i + 2 < n) std::swap(up2[i], up[i + 1]);
      std::swap(rhs[i], rhs[i + 1]);
    }
    if (di[i] == 0.0) throw Singular("tridiag_solve: zero pivot");
    const double m = lo[i + 1] / di[i];
    di[i + 1] -= m * up[i];
    if (i + 2 < n) up[i + 1] -= m * up2[i];
    rhs[i + 1] -= m * rhs[i];
  }
  if (di[n - 1] == 0.0) throw Singular("tridiag_solve: zero pivot");
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[i];
    if (i + 1 < n) s -= up[i] * x[i + 1];
    if (i + 2 < n) s -= up2[i] * x[i + 2];
    x[i] = s / di[i];
  }
  return x;
}

std::vector<double> BandMatrix::solve(std::vector<double> rhs) {
  const int n = n_, kl = kl_, ku = ku_;
  for (int j = 0; j < n; ++j) {
    const int last_row = std::min(n - 1, j + kl);
    int p = j;
    for (int i = j + 1; i <= last_row; ++i)
      if (std::abs(at(i, j)) > std::abs(at(p, j))) p = i;
    if (at(p, j) == 0.0) throw Singular("BandMatrix::solve: zero pivot");
    const int last_col = std::min(n - 1, j + kl + ku);
    if (p != j) {
      for (int c = j; c <= last_col; ++c) std::swap(at(j, c), at(p, c));
      std::swap(rhs[j], rhs[p]);
    }
    for (int i = j + 1; i <= last_row; ++i) {
      const double m = at(i, j) / at(j, j);
      if (m != 0.0) {
        for (int c = j + 1; c <= last_col; ++c) at(i, c) -= m * at(j, c);
        rhs[i] -= m * rhs[j];
      }
    }
  }
  std::vector<double> x(n);
  for (int j = n - 1; j >= 0; --j) {
    double s = rhs[j];
    const int last_col = std::min(n - 1, j + kl + ku);
    for (int c = j + 1; c <= last_col; ++c) s -= at(j, c) * x[c];
    x[j] = s / at(j, j);
  }
  return x;
}

std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int j = 0; j < n; ++j) {
    int p = j;
    for (int i = j + 1; i < n; ++i)
      if (std::abs(a[i][j]) > std::abs(a[p][j])) p = i;
    if (a[p][j] == 0.0) throw Singular("dense_solve: singular matrix");
    std::swap(a[j], a[p]);
    std::swap(b[j], b[p]);
    for (int i = j + 1; i < n; ++i) {
      const double m = a[i][j] / a[j][j];
      if (m != 0.0) {
        for (int c = j + 1; c < n; ++c) a[i][c] -= m * a[j][c];
        b[i] -= m * b[j];
      }
    }
  }
  std::vector<double> x(n);
  for (int j = n - 1; j >= 0; --j) {
    double s = b[j];
    for (int c = j + 1; c < n; ++c) s -= a[j][c] * x[c];
    x[j] = s / a[j][j];
  }
  return x;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw Singular("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

}  // namespace mslab
