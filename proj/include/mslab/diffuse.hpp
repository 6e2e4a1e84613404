#pragma once

#include <vector>

#include "mslab/dwell.hpp"
#include "mslab/expansion.hpp"

namespace mslab {

// Uniform radial grid on [0, R_out] with a symmetry ghost at r = 0.
struct RadialGrid {
  double R_out = 2.0;
  int nr = 801;

  double h() const { return R_out / (nr - 1); }
  double r(int i) const { return i * h(); }
};

struct RadialState {
  double t = 0.0;
  std::vector<double> c, mu;
};

// discrete radial Laplacian (1/r)(r u_r)_r, conservative form; at r = 0 the
// symmetric limit 2 u_rr via the ghost node
double radial_laplacian(const std::vector<double>& u, const RadialGrid& g, int i);

double energy_of(const std::vector<double>& c, const RadialGrid& g, double eps,
                 const DoubleWell& well);
double mass_of(const std::vector<double>& c, const RadialGrid& g);

// zero level set of c by linear interpolation of the single sign change
double interface_radius(const std::vector<double>& c, const RadialGrid& g);

// discrete divergence-theorem flux: d/dt int c r dr equals this exactly for
// the implicit scheme (wall flux minus the symmetry-axis flux)
double boundary_flux(const std::vector<double>& mu, const RadialGrid& g);

RadialState init_from_approx(const ApproxField& field, const RadialGrid& grid);

struct StepResult {
  RadialState state;
  std::vector<double> newton_residuals;
};

// One fully implicit Euler step of the radial Cahn-Hilliard system
//   dt c = Lap mu,  mu = -eps Lap c + f'(c)/eps,  c(R_out) = -1, mu(R_out) = 0
// solved by Newton on the coupled banded system. Throws StepFailed when
// Newton stalls.
StepResult step(const RadialState& s, double dt, const RadialGrid& grid, double eps,
                const DoubleWell& well);

struct DiffuseHistory {
  std::vector<double> ts, R_eps, energy, mass;
  std::vector<double> snapshot_times;
  std::vector<RadialState> snapshots;
  long accepted = 0, rejected = 0;
  RadialState final_state;
};

DiffuseHistory run(const ApproxField& field, const RadialGrid& grid, double eps, double T,
                   double dt0, std::vector<double> snapshot_times = {});

}  // namespace mslab
