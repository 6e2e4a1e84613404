#include "mslab/diffuse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mslab/error.hpp"
#include "mslab/linalg.hpp"
#include "mslab/numerics.hpp"

namespace mslab {

double radial_laplacian(const std::vector<double>& u, const RadialGrid& g, int i) {
  const double h = g.h();
  if (i == 0) return 4.0 * (u[1] - u[0]) / (h * h);  // 2 u_rr with the symmetric ghost
  const double rp = g.r(i) + 0.5 * h, rm = g.r(i) - 0.5 * h;
  return (rp * (u[i + 1] - u[i]) - rm * (u[i] - u[i - 1])) / (g.r(i) * h * h);
}

double energy_of(const std::vector<double>& c, const RadialGrid& g, double eps,
                 const DoubleWell& well) {
  const int n = g.nr;
  const double h = g.h();
  std::vector<double> cr(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) cr[i] = (c[i + 1] - c[i - 1]) / (2 * h);
  cr[0] = 0.0;  // symmetry
  cr[n - 1] = (c[n - 1] - c[n - 2]) / h;
  std::vector<double> integrand(n);
  for (int i = 0; i < n; ++i)
    integrand[i] = (0.5 * eps * cr[i] * cr[i] + well.f(c[i]) / eps) * g.r(i);
  return trapz(integrand, h);
}

double mass_of(const std::vector<double>& c, const RadialGrid& g) {
  std::vector<double> integrand(g.nr);
  for (int i = 0; i < g.nr; ++i) integrand[i] = c[i] * g.r(i);
  return trapz(integrand, g.h());
}

double boundary_flux(const std::vector<double>& mu, const RadialGrid& g) {
  // conservative interior rows telescope against the trapezoid mass weights:
  // (M_new - M_old)/dt = [r_{n-3/2}(mu_{n-1}-mu_{n-2}) - r_{1/2}(mu_1-mu_0)] / h
  const int n = g.nr;
  const double h = g.h();
  const double wall = (g.r(n - 1) - 0.5 * h) * (mu[n - 1] - mu[n - 2]);
  const double axis = (g.r(0) + 0.5 * h) * (mu[1] - mu[0]);
  return (wall - axis) / h;
}

double interface_radius(const std::vector<double>& c, const RadialGrid& g) {
  int count = 0;
  double rad = -1.0;
  for (int i = 0; i + 1 < g.nr; ++i) {
    if ((c[i] > 0.0 && c[i + 1] <= 0.0) || (c[i] < 0.0 && c[i + 1] >= 0.0)) {
      ++count;
      rad = g.r(i) + g.h() * c[i] / (c[i] - c[i + 1]);
    }
  }
  if (count == 0) throw NoInterface("interface_radius: no sign change");
  if (count > 1) throw MultipleInterfaces("interface_radius: " + std::to_string(count) +
                                          " sign changes");
  return rad;
}

RadialState init_from_approx(const ApproxField& field, const RadialGrid& grid) {
  if (grid.h() > field.eps() / 8.0 * (1.0 + 1e-12))
    throw ResolutionTooCoarse("init_from_approx: h_r = " + std::to_string(grid.h()) +
                              " exceeds eps/8 = " + std::to_string(field.eps() / 8.0));
  if (std::abs(grid.R_out - field.sharp().R_out) > 1e-12)
    throw GridMismatch("init_from_approx: grid R_out does not match the field");
  RadialState s;
  s.t = 0.0;
  s.c.resize(grid.nr);
  for (int i = 0; i < grid.nr; ++i) s.c[i] = field.c({grid.r(i), 0.0}, 0.0);
  s.c[grid.nr - 1] = -1.0;  // boundary row exact
  // consistent discrete chemical potential
  s.mu.resize(grid.nr);
  const DoubleWell& well = field.profiles().well;
  for (int i = 0; i + 1 < grid.nr; ++i)
    s.mu[i] = -field.eps() * radial_laplacian(s.c, grid, i) + well.df(s.c[i]) / field.eps();
  s.mu[grid.nr - 1] = 0.0;
  return s;
}

StepResult step(const RadialState& s, double dt, const RadialGrid& grid, double eps,
                const DoubleWell& well) {
  const int n = grid.nr;
  const double h = grid.h();
  const double h2 = h * h;
  std::vector<double> c = s.c, mu = s.mu;
  StepResult out;

  auto residual = [&](std::vector<double>& F) {
    double norm = 0.0;
    for (int i = 0; i < n - 1; ++i) {
      F[2 * i] = c[i] - s.c[i] - dt * radial_laplacian(mu, grid, i);
      F[2 * i + 1] = mu[i] + eps * radial_laplacian(c, grid, i) - well.df(c[i]) / eps;
    }
    F[2 * (n - 1)] = c[n - 1] + 1.0;
    F[2 * (n - 1) + 1] = mu[n - 1];
    for (double v : F) norm = std::max(norm, std::abs(v));
    return norm;
  };

  std::vector<double> F(2 * n);
  const int max_newton = 12;
  bool done = false;
  for (int it = 0; it <= max_newton; ++it) {
    const double fnorm = residual(F);
    out.newton_residuals.push_back(fnorm);
    if (fnorm <= 1e-10) {
      done = true;
      break;
    }
    if (it == max_newton) break;

    BandMatrix J(2 * n, 3, 3);
    for (int i = 0; i < n - 1; ++i) {
      // Laplacian stencil weights at row i
      double wl, wc, wr;
      if (i == 0) {
        wl = 0.0;
        wc = -4.0 / h2;
        wr = 4.0 / h2;
      } else {
        const double rp = grid.r(i) + 0.5 * h, rm = grid.r(i) - 0.5 * h;
        wl = rm / (grid.r(i) * h2);
        wc = -(rp + rm) / (grid.r(i) * h2);
        wr = rp / (grid.r(i) * h2);
      }
      const int rc = 2 * i, rm_ = 2 * i + 1;
      // F_c row: dc_i and -dt dLap(mu)
      J.at(rc, 2 * i) = 1.0;
      if (i > 0) J.at(rc, 2 * (i - 1) + 1) = -dt * wl;
      J.at(rc, 2 * i + 1) = -dt * wc;
      J.at(rc, 2 * (i + 1) + 1) = -dt * wr;
      // F_mu row: dmu_i + eps dLap(c) - f''(c_i)/eps dc_i
      J.at(rm_, 2 * i + 1) = 1.0;
      if (i > 0) J.at(rm_, 2 * (i - 1)) = eps * wl;
      J.at(rm_, 2 * i) = eps * wc - well.d2f(c[i]) / eps;
      J.at(rm_, 2 * (i + 1)) = eps * wr;
    }
    J.at(2 * (n - 1), 2 * (n - 1)) = 1.0;
    J.at(2 * (n - 1) + 1, 2 * (n - 1) + 1) = 1.0;

    std::vector<double> rhs(2 * n);
    for (int i = 0; i < 2 * n; ++i) rhs[i] = -F[i];
    const auto delta = J.solve(std::move(rhs));
    for (int i = 0; i < n; ++i) {
      c[i] += delta[2 * i];
      mu[i] += delta[2 * i + 1];
    }
  }
  if (!done)
    throw StepFailed("step: Newton stalled at residual " +
                     std::to_string(out.newton_residuals.back()) + " with dt = " +
                     std::to_string(dt));
  out.state.t = s.t + dt;
  out.state.c = std::move(c);
  out.state.mu = std::move(mu);
  return out;
}

DiffuseHistory run(const ApproxField& field, const RadialGrid& grid, double eps, double T,
                   double dt0, std::vector<double> snapshot_times) {
  const DoubleWell& well = field.profiles().well;
  RadialState s = init_from_approx(field, grid);

  std::sort(snapshot_times.begin(), snapshot_times.end());
  DiffuseHistory hist;
  hist.snapshot_times = snapshot_times;

  auto record = [&](const RadialState& st) {
    hist.ts.push_back(st.t);
    hist.R_eps.push_back(interface_radius(st.c, grid));
    hist.energy.push_back(energy_of(st.c, grid, eps, well));
    hist.mass.push_back(mass_of(st.c, grid));
  };
  record(s);
  size_t next_snap = 0;
  while (next_snap < snapshot_times.size() && snapshot_times[next_snap] <= 0.0) {
    hist.snapshots.push_back(s);
    ++next_snap;
  }

  const double dt_max = std::min(8.0 * dt0, T / 32.0);
  double dt = std::min(dt0, dt_max);
  const double energy_tol = 1e-12;

  while (s.t < T * (1.0 - 1e-14)) {
    double target = T;
    if (next_snap < snapshot_times.size()) target = std::min(target, snapshot_times[next_snap]);
    double dt_try = std::min(dt, target - s.t);

    int halvings = 0;
    for (;;) {
      try {
        StepResult res = step(s, dt_try, grid, eps, well);
        const double e_old = hist.energy.back();
        const double e_new = energy_of(res.state.c, grid, eps, well);
        if (e_new > e_old + energy_tol * (1.0 + std::abs(e_old)))
          throw StepFailed("run: energy increased by " + std::to_string(e_new - e_old));
        s = std::move(res.state);
        ++hist.accepted;
        break;
      } catch (const StepFailed&) {
        ++hist.rejected;
        if (++halvings > 20) throw;
        dt_try *= 0.5;
      }
    }
    record(s);
    if (next_snap < snapshot_times.size() &&
        s.t >= snapshot_times[next_snap] * (1.0 - 1e-14)) {
      hist.snapshots.push_back(s);
      ++next_snap;
    }
    dt = std::min(halvings == 0 ? dt * 1.25 : dt_try, dt_max);
  }
  hist.final_state = s;
  return hist;
}

}  // namespace mslab
