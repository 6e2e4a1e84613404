// Acceptance suite: runs each criterion of the verification plan at its
// stated tolerance and prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "mslab/diffuse.hpp"
#include "mslab/expansion.hpp"
#include "mslab/numerics.hpp"
#include "mslab/profiles.hpp"
#include "mslab/residuals.hpp"
#include "mslab/runner.hpp"
#include "mslab/sharp.hpp"

using namespace mslab;

namespace {

struct Criterion {
  int id;
  bool pass;
  std::string detail;
};

const ExperimentConfig& cfg() {
  static ExperimentConfig c;  // canonical radial scenario
  return c;
}

const Scenario& scenario() {
  static Scenario sc = Scenario::build(cfg());
  return sc;
}

const ConvergeResult& sweep() {
  static ConvergeResult r = run_converge(scenario(), 3);
  return r;
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

Criterion criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const RhoGrid grid(20.0, 4001);
  const auto theta0 = solve_theta0(DoubleWell(1.0), grid);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double err = 0.0;
  for (int i = 0; i < grid.n; ++i)
    err = std::max(err, std::abs(theta0.values[i] - std::tanh(grid.node(i) / std::sqrt(2.0))));
  const bool pass = err <= 1e-8 && secs < 1.0;
  return {1, pass,
          fmt("max|theta0 - tanh(rho/sqrt2)| = %.3g (<= 1e-8), runtime %.3fs (< 1s)", err, secs)};
}

Criterion criterion2() {
  const double sigma = scenario().profiles.moments.sigma;
  const double err = std::abs(sigma - std::sqrt(2.0) / 3.0);
  return {2, err <= 1e-7, fmt("|sigma - sqrt(2)/3| = %.3g (<= 1e-7), sigma = %.9f", err, sigma)};
}

Criterion criterion3() {
  const ProfileSet& ps = scenario().profiles;
  const RhoGrid& g = ps.grid;
  std::vector<double> m1(g.n), m2(g.n);
  for (int i = 0; i < g.n; ++i) {
    m1[i] = (ps.eta.values[i] - 0.5) * ps.theta0.derivative[i];
    const double tp = ps.theta0.derivative[i];
    m2[i] = ps.theta1.values[i] * tp * tp * ps.well.d3f(ps.theta0.values[i]);
  }
  const double eta_moment = std::abs(simpson(m1, g.h()));
  const double theta1_orth = std::abs(simpson(m2, g.h()));

  const ApproxField f = scenario().field(0.05);
  double solv = 0.0;
  const double R = scenario().sharp->radius(0.0);
  for (int k = 0; k < 50; ++k) {
    const double d = (-1.8 + 3.6 * k / 49.0) * scenario().chart->delta();
    solv = std::max(solv, std::abs(f.inner().solvability_residual({R - d, 0.0}, 0.0)));
  }
  const bool pass = eta_moment <= 1e-10 && theta1_orth <= 1e-7 && solv <= 1e-8;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "|int (eta-1/2) theta0'| = %.3g (<= 1e-10), |int theta1 theta0'^2 f'''| = %.3g "
                "(<= 1e-7), max solvability = %.3g (<= 1e-8)",
                eta_moment, theta1_orth, solv);
  return {3, pass, buf};
}

Criterion criterion4() {
  const auto rows = geometry_check(cfg().R0, cfg().R_out, cfg().resolved_delta(), 1000,
                                   cfg().seed);
  bool pass = true;
  double worst_fd = 0.0, worst_jac = 0.0;
  for (const auto& r : rows) {
    pass = pass && r.pass;
    if (r.name == "expansion_jacobian_fd")
      worst_jac = r.measured;
    else
      worst_fd = std::max(worst_fd, r.measured);
  }
  return {4, pass,
          fmt("1000 chart samples: max FD identity residual %.3g (<= 1e-5), jacobian vs FD "
              "determinant %.3g (<= 1e-8)",
              worst_fd, worst_jac)};
}

Criterion criterion5() {
  const double sigma = scenario().profiles.moments.sigma;
  const double T = 0.1;
  const auto sol = evolve_sharp(1.0, 2.0, sigma, T);
  double y = 1.0;
  const double dt = 1e-6;
  for (long i = 0; i < 100000; ++i) {
    auto fr = [&](double r) { return interface_ode_rhs(r, 2.0, sigma); };
    const double k1 = fr(y), k2 = fr(y + 0.5 * dt * k1), k3 = fr(y + 0.5 * dt * k2),
                 k4 = fr(y + dt * k3);
    y += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  const double err = std::abs(sol.Rs.back() - y);
  const double slope0 = interface_ode_rhs(1.0, 2.0, sigma);
  const double slope_err = std::abs(slope0 - (-0.3401));
  const bool pass = err <= 1e-8 && slope_err <= 1e-4;
  return {5, pass,
          fmt("|R_rk45(0.1) - R_rk4| = %.3g (<= 1e-8), initial slope %.6f (= -0.3401 +- 1e-4)",
              err, slope0)};
}

const Gate& gate_of(const std::string& name) {
  for (const auto& g : sweep().gates)
    if (g.name == name) return g;
  throw NumericalError("missing gate " + name);
}

Criterion criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const Gate& g = gate_of("interface_sup_slope");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "slope of sup_t|R_eps - R| over eps {0.08,0.04,0.02} = %.4f (>= 0.9); "
                "sweep wall time %.1fs (<= 1800s)",
                g.measured, secs);
  return {6, g.pass && secs <= 1800.0, buf};
}

Criterion criterion7() {
  const Gate& bulk = gate_of("rCH2_bulk_Linf_slope");
  const Gate& iface = gate_of("rCH2_interface_L2_slope");
  const Gate& rdiv = gate_of("rdiv_max");
  const Gate& weak = gate_of("rCH1_weak_slope");
  const bool pass = bulk.pass && iface.pass && rdiv.pass && weak.pass;
  char buf[400];
  std::snprintf(buf, sizeof buf,
                "rCH2 bulk Linf slope %.4f (>= 1.8: %s), rCH2 interface L2 slope %.4f (>= 0.9: "
                "%s), max|rdiv| %.3g (<= 1e-12: %s), rCH1 weak slope %.4f (>= 0.9: %s)",
                bulk.measured, bulk.pass ? "ok" : "FAIL", iface.measured,
                iface.pass ? "ok" : "FAIL", rdiv.measured, rdiv.pass ? "ok" : "FAIL",
                weak.measured, weak.pass ? "ok" : "FAIL");
  return {7, pass, buf};
}

Criterion criterion8() {
  const Gate& g = gate_of("boundary_defect");
  // diffuse boundary rows exact on every accepted step of a short run
  const double eps = 0.08;
  const ApproxField f = scenario().field(eps);
  const RadialGrid rg = scenario().diffuse_grid(eps);
  RadialState s = init_from_approx(f, rg);
  double row_defect = std::max(std::abs(s.c[rg.nr - 1] + 1.0), std::abs(s.mu[rg.nr - 1]));
  for (int k = 0; k < 10; ++k) {
    s = step(s, 10 * eps * eps * eps, rg, eps, scenario().profiles.well).state;
    row_defect = std::max({row_defect, std::abs(s.c[rg.nr - 1] + 1.0), std::abs(s.mu[rg.nr - 1])});
  }
  const bool pass = g.pass && row_defect <= 1e-14;
  return {8, pass,
          fmt("max wall defect of (c_A+1, mu_A) = %.3g (<= 1e-12); diffuse boundary rows "
              "defect %.3g over 10 steps",
              g.measured, row_defect)};
}

Criterion criterion9() {
  const Gate& f2 = gate_of("min_f2_outside");
  const Gate& pq = gate_of("pq_bound_finite");
  double pq_val = 0.0;
  for (const auto& r : sweep().reports) pq_val = std::max(pq_val, r.pq_bound);
  return {9, f2.pass && pq.pass,
          fmt("min f''(c_A) outside Gamma(delta) over the sweep = %.4f (>= 1), pq bound "
              "finite, sup = %.4f",
              f2.measured, pq_val)};
}

Criterion criterion10() {
  const Gate& g = gate_of("energy_monotone");
  long steps = 0;
  for (const auto& r : sweep().reports) steps += r.accepted_steps;
  return {10, g.pass,
          fmt("energy non-increasing across 100%% of %g accepted steps in every run "
              "(indicator %.0f = 1)",
              static_cast<double>(steps), g.measured)};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);

  std::vector<Criterion (*)()> crits = {criterion1, criterion2, criterion3, criterion4,
                                        criterion5, criterion6, criterion7, criterion8,
                                        criterion9, criterion10};
  int failures = 0;
  for (int k = 1; k <= 10; ++k) {
    if (only != 0 && only != k) continue;
    const Criterion c = crits[k - 1]();
    std::printf("criterion %2d: %s - %s\n", c.id, c.pass ? "PASS" : "FAIL", c.detail.c_str());
    if (!c.pass) ++failures;
  }
  return failures;
}
