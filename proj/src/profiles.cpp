#include "mslab/profiles.hpp"

#include <algorithm>
#include <cmath>

#include "mslab/error.hpp"
#include "mslab/linalg.hpp"

namespace mslab {

namespace {

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double psi_prime(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

// OLS fit of the exponential envelope rate on the tail rho in [L/2, L-2].
double fit_decay(const RhoGrid& grid, const std::vector<double>& values, double ff_left,
                 double ff_right) {
  std::vector<double> xs, ys;
  for (int i = 0; i < grid.n; ++i) {
    const double rho = grid.node(i);
    const double a = std::abs(rho);
    if (a < grid.L / 2 || a > grid.L - 2) continue;
    const double ff = rho > 0 ? ff_right : ff_left;
    const double e = std::abs(values[i] - ff);
    if (e < 1e-13) continue;
    xs.push_back(a);
    ys.push_back(std::log(e));
  }
  if (xs.size() < 8) return 0.0;
  return -fit_line(xs, ys).slope;
}

struct HalfSolve {
  // Solves the Dirichlet problem for c'' - f''(theta0) c = rhs on one side of
  // the center node (center value fixed to zero), for two right hand sides.
  // side = -1: nodes 0..i0-1 with Dirichlet at node 0;
  // side = +1: nodes i0+1..n-1 with Dirichlet at node n-1.
  static std::vector<double> run(const DoubleWell& well, const std::vector<double>& theta,
                                 const RhoGrid& grid, const std::vector<double>& rhs, double bc,
                                 int side) {
    const int n = grid.n;
    const int i0 = grid.center();
    const double h2 = grid.h() * grid.h();
    const int m = side < 0 ? i0 : n - 1 - i0;  // unknown count
    std::vector<double> lo(m, 0.0), di(m, 0.0), up(m, 0.0), b(m, 0.0);
    auto gidx = [&](int k) { return side < 0 ? k : i0 + 1 + k; };
    for (int k = 0; k < m; ++k) {
      const int i = gidx(k);
      const bool dirichlet = (side < 0 && k == 0) || (side > 0 && k == m - 1);
      if (dirichlet) {
        di[k] = 1.0;
        b[k] = bc;
      } else {
        lo[k] = 1.0 / h2;
        di[k] = -2.0 / h2 - well.d2f(theta[i]);
        up[k] = 1.0 / h2;
        b[k] = rhs[i];
        // neighbors at the center node carry value 0
        if (side < 0 && k == m - 1) up[k] = 0.0;
        if (side > 0 && k == 0) lo[k] = 0.0;
      }
    }
    return tridiag_solve(std::move(lo), std::move(di), std::move(up), std::move(b));
  }
};

// Bordered solve without the solvability precondition (used for the basis
// responses whose combination, not each term, satisfies the condition).
LinearizedSolve linearized_raw(const DoubleWell& well, const ProfileSolution& theta0,
                               const std::vector<double>& rhs) {
  const RhoGrid& grid = theta0.grid;
  const int n = grid.n;
  const int i0 = grid.center();
  const double h2 = grid.h() * grid.h();
  const std::vector<double>& th = theta0.values;
  const std::vector<double>& b = theta0.derivative;

  const double bc_left = -rhs.front() / well.d2f(th.front());
  const double bc_right = -rhs.back() / well.d2f(th.back());

  auto xl_r = HalfSolve::run(well, th, grid, rhs, bc_left, -1);
  auto xr_r = HalfSolve::run(well, th, grid, rhs, bc_right, +1);
  auto xl_b = HalfSolve::run(well, th, grid, b, 0.0, -1);
  auto xr_b = HalfSolve::run(well, th, grid, b, 0.0, +1);

  // center row with c(i0) = 0 determines the multiplier
  const double s_r = (xl_r[i0 - 1] + xr_r[0]) / h2;
  const double s_b = (xl_b[i0 - 1] + xr_b[0]) / h2;
  const double denom = b[i0] - s_b;
  if (std::abs(denom) < 1e-300) throw Singular("solve_linearized_profile: bordered pivot");
  const double lambda = (rhs[i0] - s_r) / denom;

  LinearizedSolve out;
  out.lambda = lambda;
  ProfileSolution& c = out.solution;
  c.grid = grid;
  c.values.assign(n, 0.0);
  for (int i = 0; i < i0; ++i) c.values[i] = xl_r[i] - lambda * xl_b[i];
  c.values[i0] = 0.0;
  for (int i = i0 + 1; i < n; ++i) c.values[i] = xr_r[i - i0 - 1] - lambda * xr_b[i - i0 - 1];

  double res = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double lhs = (c.values[i - 1] - 2 * c.values[i] + c.values[i + 1]) / h2 -
                       well.d2f(th[i]) * c.values[i];
    res = std::max(res, std::abs(lhs - (rhs[i] - lambda * b[i])));
  }
  c.residual_norm = res;
  c.derivative = deriv4(c.values, grid.h());
  c.far_field = {bc_left, bc_right};
  c.decay_rate = fit_decay(grid, c.values, bc_left, bc_right);
  c.build_interp();
  return out;
}

}  // namespace

void ProfileSolution::build_interp() {
  interp_ = UniformTable(-grid.L, grid.h(), values);
  dinterp_ = UniformTable(-grid.L, grid.h(), derivative);
}

double eta_fn(double rho) {
  const double t = std::clamp(0.5 * (rho + 1.0), 0.0, 1.0);
  const double a = psi(t), bb = psi(1.0 - t);
  if (a == 0.0) return 0.0;
  if (bb == 0.0) return 1.0;
  return a / (a + bb);
}

double eta_prime_fn(double rho) {
  const double t = 0.5 * (rho + 1.0);
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = psi(t), bb = psi(1.0 - t);
  const double s = a + bb;
  return 0.5 * (psi_prime(t) * bb + a * psi_prime(1.0 - t)) / (s * s);
}

ProfileSolution solve_theta0(const DoubleWell& well, const RhoGrid& grid) {
  const int n = grid.n;
  const int i0 = grid.center();
  const int m = n - i0;  // nodes on [0, L]
  const double h = grid.h();
  const double h2 = h * h;
  const double a = std::sqrt(well.beta / 2.0);

  // Numerov residual on the half line, theta(0) = 0, theta(L) = 1 fixed.
  std::vector<double> th(m);
  for (int k = 0; k < m; ++k) th[k] = std::tanh(a * (k * h));
  th[0] = 0.0;
  th[m - 1] = 1.0;

  auto g = [&](double s) { return well.df(s); };
  const int interior = m - 2;
  if (interior < 3) throw NumericalError("solve_theta0: grid too small");

  std::vector<double> f(interior);
  double fnorm = 0.0;
  const int max_iter = 50;
  bool converged = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    fnorm = 0.0;
    for (int k = 1; k <= interior; ++k) {
      f[k - 1] = th[k + 1] - 2 * th[k] + th[k - 1] -
                 (h2 / 12.0) * (g(th[k + 1]) + 10.0 * g(th[k]) + g(th[k - 1]));
      fnorm = std::max(fnorm, std::abs(f[k - 1]));
    }
    if (fnorm <= 1e-12) {
      converged = true;
      break;
    }
    std::vector<double> lo(interior, 0.0), di(interior, 0.0), up(interior, 0.0), rhs(interior);
    for (int k = 1; k <= interior; ++k) {
      di[k - 1] = -2.0 - (10.0 * h2 / 12.0) * well.d2f(th[k]);
      if (k > 1) lo[k - 1] = 1.0 - (h2 / 12.0) * well.d2f(th[k - 1]);
      if (k < interior) up[k - 1] = 1.0 - (h2 / 12.0) * well.d2f(th[k + 1]);
      rhs[k - 1] = -f[k - 1];
    }
    auto delta = tridiag_solve(std::move(lo), std::move(di), std::move(up), std::move(rhs));
    for (int k = 1; k <= interior; ++k) th[k] += delta[k - 1];
  }
  if (!converged) throw NonConvergence("solve_theta0: Newton did not converge");

  ProfileSolution sol;
  sol.grid = grid;
  sol.values.assign(n, 0.0);
  for (int k = 0; k < m; ++k) {
    sol.values[i0 + k] = th[k];
    sol.values[i0 - k] = -th[k];  // odd reflection; exact theta0(0) = 0
  }
  sol.far_field = {-1.0, 1.0};
  sol.residual_norm = fnorm;

  // the profile must have settled well before the truncation boundary
  const int probe = i0 + static_cast<int>(std::round((grid.L - 1.0) / h));
  const double mismatch = std::abs(sol.values[std::min(probe, n - 1)] - 1.0);
  if (mismatch > 1e-6)
    throw GridTooNarrow("solve_theta0: far-field mismatch " + std::to_string(mismatch) +
                        " at rho = L-1; increase the half width");

  sol.derivative = deriv4(sol.values, h);
  sol.decay_rate = fit_decay(grid, sol.values, -1.0, 1.0);
  sol.build_interp();
  return sol;
}

ProfileSolution build_eta(const RhoGrid& grid) {
  ProfileSolution sol;
  sol.grid = grid;
  sol.values.resize(grid.n);
  sol.derivative.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    sol.values[i] = eta_fn(grid.node(i));
    sol.derivative[i] = eta_prime_fn(grid.node(i));
  }
  sol.far_field = {0.0, 1.0};
  sol.decay_rate = 0.0;  // compactly supported transition
  sol.residual_norm = 0.0;
  sol.build_interp();
  return sol;
}

LinearizedSolve solve_linearized_profile(const DoubleWell& well, const ProfileSolution& theta0,
                                         const std::vector<double>& rhs, double tol_solv) {
  if (rhs.size() != static_cast<size_t>(theta0.grid.n))
    throw GridMismatch("solve_linearized_profile: rhs size does not match the grid");
  std::vector<double> prod(theta0.grid.n);
  double rnorm = 0.0;
  for (int i = 0; i < theta0.grid.n; ++i) {
    prod[i] = rhs[i] * theta0.derivative[i];
    rnorm = std::max(rnorm, std::abs(rhs[i]));
  }
  const double solv = simpson(prod, theta0.grid.h());
  if (std::abs(solv) > tol_solv * std::max(1.0, rnorm))
    throw SolvabilityViolated("solve_linearized_profile: <rhs, theta0'> = " +
                              std::to_string(solv));
  LinearizedSolve out = linearized_raw(well, theta0, rhs);
  out.solvability = solv;
  return out;
}

MomentTable compute_moments(const ProfileSolution& theta0, const ProfileSolution& eta) {
  if (!(theta0.grid == eta.grid)) throw GridMismatch("compute_moments: profiles on different grids");
  const int n = theta0.grid.n;
  const double h = theta0.grid.h();
  std::vector<double> tp2(n), tp(n), etp(n), ketp(n);
  for (int i = 0; i < n; ++i) {
    const double d = theta0.derivative[i];
    tp2[i] = d * d;
    tp[i] = d;
    etp[i] = eta.values[i] * d;
    ketp[i] = eta.derivative[i] * d;
  }
  MomentTable mt;
  mt.sigma = 0.5 * simpson(tp2, h);
  mt.int_theta0p = simpson(tp, h);
  mt.int_eta_theta0p = simpson(etp, h);
  mt.K_eta = simpson(ketp, h);
  mt.eta_tilde = 0.5 * mt.K_eta;

  // Richardson estimate: compare against the half-resolution rule
  auto coarse = [&](const std::vector<double>& f) {
    std::vector<double> c;
    for (int i = 0; i < n; i += 2) c.push_back(f[i]);
    return simpson(c, 2 * h);
  };
  mt.quad_error = std::max({std::abs(0.5 * coarse(tp2) - mt.sigma),
                            std::abs(coarse(tp) - mt.int_theta0p),
                            std::abs(coarse(etp) - mt.int_eta_theta0p),
                            std::abs(coarse(ketp) - mt.K_eta)});
  return mt;
}

ProfileSet ProfileSet::build(double beta, const RhoGrid& grid) {
  ProfileSet ps{DoubleWell(beta), grid, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
  ps.theta0 = solve_theta0(ps.well, grid);
  ps.eta = build_eta(grid);
  ps.moments = compute_moments(ps.theta0, ps.eta);

  const int n = grid.n;
  std::vector<double> r_eta(n), r_one(n, 1.0), r_tp(n), r_etap(n), r_theta1(n);
  for (int i = 0; i < n; ++i) {
    r_eta[i] = ps.eta.values[i];
    r_tp[i] = ps.theta0.derivative[i];
    r_etap[i] = ps.eta.derivative[i];
    r_theta1[i] = ps.moments.sigma - ps.theta0.derivative[i];
  }
  ps.w_eta = linearized_raw(ps.well, ps.theta0, r_eta).solution;
  ps.w_one = linearized_raw(ps.well, ps.theta0, r_one).solution;
  ps.w_theta0p = linearized_raw(ps.well, ps.theta0, r_tp).solution;
  ps.w_etap = linearized_raw(ps.well, ps.theta0, r_etap).solution;
  ps.theta1 = solve_linearized_profile(ps.well, ps.theta0, r_theta1).solution;

  std::vector<double> ip(n), im(n);
  for (int i = 0; i < n; ++i) {
    ip[i] = ps.eta.values[i] * ps.theta0.derivative[i];
    im[i] = (1.0 - ps.eta.values[i]) * ps.theta0.derivative[i];
  }
  ps.P_plus = UniformTable(-grid.L, grid.h(), cumtrapz(ip, grid.h()));
  ps.P_minus = UniformTable(-grid.L, grid.h(), cumtrapz(im, grid.h()));
  return ps;
}

}  // namespace mslab
