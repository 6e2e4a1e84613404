#pragma once

#include <vector>

namespace mslab {

// Radially symmetric sharp-interface limit on the disk of radius R_out:
// harmonic chemical potential in each phase, mu = sigma H on the circle of
// radius R(t), mu = 0 on the outer wall, Stefan condition for dR/dt, v = 0.

// mu(r): sigma/R inside, (sigma/R) ln(r/R_out)/ln(R/R_out) in the annulus.
double radial_mu(double R, double R_out, double sigma, double r);
// one-sided d mu / dr (the annulus branch; 0 inside)
double radial_mu_dr(double R, double R_out, double sigma, double r);

// Stefan condition with v = 0 and V = -dR/dt:
// dR/dt = sigma / (2 R^2 ln(R/R_out)) < 0.
double interface_ode_rhs(double R, double R_out, double sigma);

// Pressure jump [p] = p^+ - p^- = 2 sigma H = 2 sigma / R (v = 0 radially).
double radial_stokes_pressure(double R, double sigma);

struct SharpSolution {
  double R0 = 1.0, R_out = 2.0, sigma = 0.4714;
  double T = 0.0;

  // accepted RK45 steps (dense output nodes) and slopes
  std::vector<double> ts, Rs, fs;

  // radius at time t: cubic Hermite on the dense output inside [0, T]
  double radius_dense(double t) const;
  // radius from the exact time integral t(R) = (2/sigma)(F(R0) - F(R)),
  // F(r) = (r^3/3) ln(R_out/r) + r^3/9, inverted by Newton
  double radius(double t) const;
  double dRdt(double t) const { return interface_ode_rhs(radius(t), R_out, sigma); }

  double mu(double r, double t) const { return radial_mu(radius(t), R_out, sigma, r); }
  double mu_interface(double t) const { return sigma / radius(t); }
  double pressure_jump(double t) const { return radial_stokes_pressure(radius(t), sigma); }
  double time_of_radius(double R) const;
};

// Adaptive RK45 (Dormand-Prince) with dense output; relative tolerance rtol.
// Throws InterfaceCollapse if R reaches 0.05 R_out before T.
SharpSolution evolve_sharp(double R0, double R_out, double sigma, double T, double rtol = 1e-10);

}  // namespace mslab
