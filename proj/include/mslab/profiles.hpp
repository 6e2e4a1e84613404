#pragma once

#include <utility>
#include <vector>

#include "mslab/dwell.hpp"
#include "mslab/grid1d.hpp"
#include "mslab/numerics.hpp"

namespace mslab {

// Tabulated solution of a profile ODE on the truncated rho-line.
struct ProfileSolution {
  RhoGrid grid;
  std::vector<double> values;
  std::vector<double> derivative;       // 4th order differences of values
  std::pair<double, double> far_field;  // limits at -inf, +inf
  double decay_rate = 0.0;              // fitted exponential envelope rate
  double residual_norm = 0.0;           // max norm residual of the solved system

  double value_at(double rho) const { return interp_(rho); }
  double deriv_at(double rho) const { return dinterp_(rho); }
  void build_interp();

 private:
  UniformTable interp_, dinterp_;
};

struct MomentTable {
  double sigma = 0.0;            // 1/2 int theta0'^2
  double int_theta0p = 0.0;      // int theta0'      (= 2)
  double int_eta_theta0p = 0.0;  // int eta theta0'  (= 1)
  double K_eta = 0.0;            // int eta' theta0'
  double eta_tilde = 0.0;        // K_eta / 2
  double quad_error = 0.0;       // Richardson estimate of the quadrature error
};

// Smooth transition eta: 0 on (-inf,-1], 1 on [1,inf), eta' >= 0, and
// eta(-rho) = 1 - eta(rho) so that int (eta - 1/2) theta0' = 0 for even
// theta0'. C-infinity exponential blend.
double eta_fn(double rho);
double eta_prime_fn(double rho);

// Optimal profile: -theta0'' + f'(theta0) = 0, theta0(0) = 0, theta0(+-inf) =
// +-1. Numerov discretization on the half line [0, L] with odd reflection.
ProfileSolution solve_theta0(const DoubleWell& well, const RhoGrid& grid);

// eta tabulated on the grid (values from eta_fn; closed form stays available).
ProfileSolution build_eta(const RhoGrid& grid);

// Bounded solution of c'' - f''(theta0) c = rhs with c(0) = 0, via the
// bordered system [A, theta0'; e0^T, 0] eliminated around the center node.
// Requires <rhs, theta0'> = 0 (Fredholm condition at the kernel theta0').
struct LinearizedSolve {
  ProfileSolution solution;
  double lambda = 0.0;       // Lagrange multiplier (kernel component removed)
  double solvability = 0.0;  // quadrature value of <rhs, theta0'>
};

LinearizedSolve solve_linearized_profile(const DoubleWell& well, const ProfileSolution& theta0,
                                         const std::vector<double>& rhs,
                                         double tol_solv = 1e-8);

MomentTable compute_moments(const ProfileSolution& theta0, const ProfileSolution& eta);

// Everything the expansion module needs from the 1-D profile machinery,
// including the linearized-solver responses to the four basis right hand
// sides that span every order-1 inner equation in the radial scenario.
struct ProfileSet {
  DoubleWell well;
  RhoGrid grid;
  ProfileSolution theta0;
  ProfileSolution eta;
  ProfileSolution theta1;  // response to sigma - theta0'
  MomentTable moments;

  // responses W[g]: solution of w'' - f''(theta0) w = g, w(0) = 0
  ProfileSolution w_eta;        // g = eta
  ProfileSolution w_one;        // g = 1
  ProfileSolution w_theta0p;    // g = theta0'
  ProfileSolution w_etap;       // g = eta'
  // cumulative moments for the inner pressure profile
  UniformTable P_plus;   // int_{-inf}^rho eta theta0'
  UniformTable P_minus;  // int_{-inf}^rho (1 - eta) theta0'

  static ProfileSet build(double beta, const RhoGrid& grid);
  static ProfileSet build_default(double beta = 1.0) { return build(beta, RhoGrid(20.0, 4001)); }
};

}  // namespace mslab
