#pragma once

#include <cstddef>
#include <vector>

namespace mslab {

// Tridiagonal solve with partial pivoting (band grows by one superdiagonal).
// lo[i] multiplies x[i-1] in row i (lo[0] unused), up[i] multiplies x[i+1]
// (up[n-1] unused). Throws Singular on a zero pivot.
std::vector<double> tridiag_solve(std::vector<double> lo, std::vector<double> di,
                                  std::vector<double> up, std::vector<double> rhs);

// General banded matrix with kl sub- and ku superdiagonals, LAPACK-style
// column storage with room for pivoting fill.
class BandMatrix {
 public:
  BandMatrix(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1), ab_(static_cast<size_t>(ld_) * n, 0.0) {}

  double& at(int i, int j) { return ab_[static_cast<size_t>(j) * ld_ + (i - j + kl_ + ku_)]; }
  double at(int i, int j) const { return ab_[static_cast<size_t>(j) * ld_ + (i - j + kl_ + ku_)]; }
  int n() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }

  // Factor-and-solve with partial pivoting; destroys the matrix contents.
  std::vector<double> solve(std::vector<double> rhs);

 private:
  int n_, kl_, ku_, ld_;
  std::vector<double> ab_;
};

// Dense LU solve with partial pivoting. Test-oracle grade, O(n^3).
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;  // rms residual of the fit
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mslab
