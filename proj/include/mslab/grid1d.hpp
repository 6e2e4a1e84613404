#pragma once

#include <vector>

#include "mslab/error.hpp"

namespace mslab {

// Uniform grid on [-L, L] with an odd node count so rho = 0 is a node.
struct RhoGrid {
  double L = 20.0;
  int n = 4001;

  RhoGrid() = default;
  RhoGrid(double half_width, int nodes) : L(half_width), n(nodes) {
    if (!(L > 0.0)) throw NumericalError("RhoGrid: half width must be positive");
    if (n < 5 || n % 2 == 0) throw NumericalError("RhoGrid: node count must be odd and >= 5");
  }

  double h() const { return 2.0 * L / (n - 1); }
  double node(int i) const { return -L + i * h(); }
  int center() const { return (n - 1) / 2; }  // index of rho = 0

  std::vector<double> nodes() const {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = node(i);
    return x;
  }

  bool operator==(const RhoGrid& o) const { return L == o.L && n == o.n; }
};

}  // namespace mslab
