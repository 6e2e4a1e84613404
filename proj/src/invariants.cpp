#include <cmath>
#include <filesystem>
#include <ostream>
#include <random>

#include "mslab/csv.hpp"
#include "mslab/error.hpp"
#include "mslab/numerics.hpp"
#include "mslab/runner.hpp"

namespace mslab {

namespace {

struct Collector {
  std::vector<InvariantResult> rows;
  std::string filter;
  bool wants(const std::string& module) const {
    return filter.empty() || module.find(filter) != std::string::npos;
  }
  void add(const std::string& module, const std::string& name, double measured, double threshold,
           bool lower_is_pass = false) {
    rows.push_back({module, name, measured, threshold,
                    lower_is_pass ? measured >= threshold : measured <= threshold});
  }
};

}  // namespace

std::vector<InvariantResult> geometry_check(double R, double R_out, double delta, int samples,
                                            std::uint64_t seed) {
  Collector col;
  const double rate = -0.3;
  Curve curve = Curve::circle({0, 0}, [R, rate](double t) { return R + rate * t; },
                              [rate](double) { return rate; });
  TubularChart chart(curve, delta, DomainBoundary::disk(R_out), {0.0, 0.05});

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> us(0.0, 1.0), ud(-1.8 * delta, 1.8 * delta),
      ut(0.0, 0.05);
  HField h;
  h.h = [](double s, double t) { return 0.04 * std::sin(2 * kPi * s) * (1.0 + t); };
  h.dh_ds = [](double s, double t) { return 0.08 * kPi * std::cos(2 * kPi * s) * (1.0 + t); };
  h.d2h_ds2 = [](double s, double t) {
    return -0.16 * kPi * kPi * std::sin(2 * kPi * s) * (1.0 + t);
  };
  h.dh_dt = [](double s, double) { return 0.04 * std::sin(2 * kPi * s); };
  const double eps = 0.07;

  double grad_unit = 0.0, orth = 0.0, chain = 0.0, jac = 0.0, dtd = 0.0, roundtrip = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double s = us(rng), d = ud(rng), t = ut(rng);
    const Vec2 x = curve.point(s, t) + d * curve.normal(s, t);

    auto dist = [&](Vec2 y) { return chart.signed_distance(y, t); };
    const double gx = fd_deriv([&](double u) { return dist({u, x.y}); }, x.x, 1e-5);
    const double gy = fd_deriv([&](double u) { return dist({x.x, u}); }, x.y, 1e-5);
    grad_unit = std::max(grad_unit, std::abs(std::hypot(gx, gy) - 1.0));

    const Vec2 gS = chart.grad_S(x, t);
    orth = std::max(orth, std::abs(gS.x * gx + gS.y * gy));

    // stretched-coordinate chain rule with a smooth test profile
    auto rho_of = [&](Vec2 y) { return dist(y) / eps - h.h(chart.S(y, t), t); };
    auto phi = [](double rho, Vec2 y) { return std::tanh(rho) * (1.0 + 0.2 * y.x); };
    auto dphi = [](double rho, Vec2 y) {
      const double c = std::cosh(rho);
      return (1.0 + 0.2 * y.x) / (c * c);
    };
    auto composite = [&](Vec2 y) { return phi(rho_of(y), y); };
    const double fx = fd_deriv([&](double u) { return composite({u, x.y}); }, x.x, 1e-4);
    const double fy = fd_deriv([&](double u) { return composite({x.x, u}); }, x.y, 1e-4);
    const Vec2 n = chart.normal_at(x, t);
    const Vec2 gg = chart.grad_gamma(h, x, t);
    const double rho = rho_of(x);
    const Vec2 pred = dphi(rho, x) * ((1.0 / eps) * n - gg) +
                      Vec2{std::tanh(rho) * 0.2, 0.0};
    chain = std::max({chain, std::abs(fx - pred.x), std::abs(fy - pred.y)});

    // Jacobian expansion against the FD determinant of the chart map
    auto X = [&](double rr, double ss) { return curve.point(ss, t) + rr * curve.normal(ss, t); };
    auto det_at = [&](double rr) {
      const double hh = 1e-4;
      const Vec2 dxr = (1.0 / (12 * hh)) * (-1.0 * X(rr + 2 * hh, s) + 8.0 * X(rr + hh, s) -
                                            8.0 * X(rr - hh, s) + X(rr - 2 * hh, s));
      const Vec2 dxs = (1.0 / (12 * hh)) * (-1.0 * X(rr, s + 2 * hh) + 8.0 * X(rr, s + hh) -
                                            8.0 * X(rr, s - hh) + X(rr, s - 2 * hh));
      return dxr.x * dxs.y - dxr.y * dxs.x;
    };
    const double rho_j = d / eps;
    jac = std::max(jac, std::abs(det_at(d) / det_at(0.0) -
                                 expansion_jacobian(eps, rho_j, 0.0, curve.kappa(s, t))));

    // -dt d_Gamma = V independent of r
    const double dtd_fd =
        fd_deriv([&](double u) { return chart.signed_distance(x, u); }, t, 1e-5);
    dtd = std::max(dtd, std::abs(-dtd_fd - curve.normal_velocity(s, t)));

    const auto st = chart.stretch(x, t, eps, h);
    roundtrip = std::max(roundtrip, norm(chart.unstretch(st.rho, st.s, t, eps, h) - x));
  }
  col.add("geometry", "grad_d_unit_norm", grad_unit, 1e-5);
  col.add("geometry", "gradS_orthogonal_gradd", orth, 1e-5);
  col.add("geometry", "stretched_chain_rule", chain, 1e-5);
  col.add("geometry", "expansion_jacobian_fd", jac, 1e-8);
  col.add("geometry", "dt_d_is_normal_velocity", dtd, 1e-8);
  col.add("geometry", "stretch_round_trip", roundtrip, 1e-9);
  return col.rows;
}

std::vector<InvariantResult> run_invariants(const ExperimentConfig& cfg,
                                            const std::string& filter) {
  cfg.validate();
  Collector col;
  col.filter = filter;

  if (col.wants("profiles")) {
    const RhoGrid grid(cfg.profile_half_width, cfg.profile_nodes);
    const DoubleWell well(cfg.beta);
    const ProfileSolution theta0 = solve_theta0(well, grid);
    const ProfileSolution eta = build_eta(grid);
    const MomentTable mt = compute_moments(theta0, eta);

    const double a = std::sqrt(cfg.beta / 2.0);
    double tanh_err = 0.0, mono = 1e300;
    for (int i = 0; i < grid.n; ++i) {
      tanh_err = std::max(tanh_err, std::abs(theta0.values[i] - std::tanh(a * grid.node(i))));
      if (i + 1 < grid.n) mono = std::min(mono, theta0.values[i + 1] - theta0.values[i]);
    }
    col.add("profiles", "theta0_tanh_distance", tanh_err, 1e-8);
    col.add("profiles", "theta0_monotone", mono, 0.0, true);
    col.add("profiles", "theta0_center_zero", std::abs(theta0.values[grid.center()]), 0.0);
    col.add("profiles", "theta0_newton_residual", theta0.residual_norm, 1e-10);
    col.add("profiles", "theta0_decay_rate", theta0.decay_rate, 1.3, true);

    if (cfg.beta == 1.0)
      col.add("profiles", "sigma_closed_form", std::abs(mt.sigma - std::sqrt(2.0) / 3.0), 1e-7);
    col.add("profiles", "int_theta0p_is_2", std::abs(mt.int_theta0p - 2.0), 1e-8);
    col.add("profiles", "quadrature_error", mt.quad_error, 1e-8);

    std::vector<double> moment(grid.n);
    for (int i = 0; i < grid.n; ++i)
      moment[i] = (eta.values[i] - 0.5) * theta0.derivative[i];
    col.add("profiles", "eta_moment_condition", std::abs(simpson(moment, grid.h())), 1e-10);

    std::vector<double> rhs(grid.n);
    for (int i = 0; i < grid.n; ++i) rhs[i] = mt.sigma - theta0.derivative[i];
    const auto t1 = solve_linearized_profile(well, theta0, rhs);
    col.add("profiles", "theta1_solvability", std::abs(t1.solvability), 1e-8);
    std::vector<double> orth(grid.n);
    for (int i = 0; i < grid.n; ++i) {
      const double tp = theta0.derivative[i];
      orth[i] = t1.solution.values[i] * tp * tp * well.d3f(theta0.values[i]);
    }
    col.add("profiles", "theta1_orthogonality", std::abs(simpson(orth, grid.h())), 1e-7);
  }

  if (col.wants("geometry")) {
    auto rows = geometry_check(cfg.R0, cfg.R_out, cfg.resolved_delta(), 1000, cfg.seed);
    col.rows.insert(col.rows.end(), rows.begin(), rows.end());
  }

  Scenario sc = Scenario::build(cfg);

  if (col.wants("sharp")) {
    const double sigma = sc.profiles.moments.sigma;
    // fixed-step RK4 oracle at the acceptance horizon
    const double T = std::min(cfg.T, 0.1);
    double y = cfg.R0;
    const double dt = 1e-6;
    const long n = static_cast<long>(std::llround(T / dt));
    for (long i = 0; i < n; ++i) {
      auto f = [&](double r) { return interface_ode_rhs(r, cfg.R_out, sigma); };
      const double k1 = f(y), k2 = f(y + 0.5 * dt * k1), k3 = f(y + 0.5 * dt * k2),
                   k4 = f(y + dt * k3);
      y += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    col.add("sharp", "rk45_vs_rk4_oracle", std::abs(sc.sharp->radius(T) - y), 1e-8);

    // flux identity: -dR/dt = -1/2 [dn mu]
    const double h = 1e-6;
    const double dmu = (radial_mu(cfg.R0, cfg.R_out, sigma, cfg.R0 + 2 * h) -
                        radial_mu(cfg.R0, cfg.R_out, sigma, cfg.R0 + h)) / h;
    const double rhs0 = interface_ode_rhs(cfg.R0, cfg.R_out, sigma);
    col.add("sharp", "stefan_flux_identity", std::abs(0.5 * dmu - rhs0), 1e-5);

    double harm = 0.0;
    for (double r : {0.3 * cfg.R0, 1.5 * cfg.R0}) {
      if (std::abs(r - cfg.R0) < 0.1) continue;
      auto mu = [&](double rr) { return radial_mu(cfg.R0, cfg.R_out, sigma, rr); };
      const double hh = 1e-4;
      harm = std::max(harm, std::abs((mu(r + hh) - 2 * mu(r) + mu(r - hh)) / (hh * hh) +
                                     (mu(r + hh) - mu(r - hh)) / (2 * hh * r)));
    }
    col.add("sharp", "mu_harmonic", harm, 1e-7);
  }

  if (col.wants("expansion")) {
    const double eps = sc.cfg.eps_list[sc.cfg.eps_list.size() / 2];
    const ApproxField f = sc.field(eps);
    double bdry = 0.0;
    for (int k = 0; k < 32; ++k) {
      const double a = 2.0 * kPi * k / 32;
      const Vec2 x{cfg.R_out * std::cos(a), cfg.R_out * std::sin(a)};
      bdry = std::max({bdry, std::abs(f.c(x, 0.0) + 1.0), std::abs(f.mu(x, 0.0))});
    }
    col.add("expansion", "boundary_conditions_exact", bdry, 1e-12);

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> ud(-1.8, 1.8), ua(0.0, 2 * kPi);
    double solv = 0.0;
    const double R = sc.sharp->radius(0.0);
    for (int k = 0; k < 40; ++k) {
      const double d = ud(rng) * sc.chart->delta(), aa = ua(rng);
      const Vec2 x{(R - d) * std::cos(aa), (R - d) * std::sin(aa)};
      solv = std::max(solv, std::abs(f.inner().solvability_residual(x, 0.0)));
    }
    col.add("expansion", "inner_solvability_residual", solv, 1e-8);
    col.add("expansion", "c1_center_normalization",
            std::abs(f.inner().c1(0.0, {R, 0.0}, 0.0)), 0.0);

    const SpectralReport rep = spectral_assumption_check(f, cfg.T / 2, 2000, cfg.seed);
    col.add("expansion", "spectral_f2_floor", rep.min_f2_outside, 1.0, true);
    col.add("expansion", "spectral_decomposition", rep.decomposition_error, 1e-12);
    col.add("expansion", "spectral_theta1_orth", std::abs(rep.theta1_orthogonality), 1e-7);
  }

  if (col.wants("diffuse")) {
    const DoubleWell well(cfg.beta);
    RadialGrid g{cfg.R_out, 201};
    RadialState s;
    s.c.assign(g.nr, -1.0);
    s.mu.assign(g.nr, 0.0);
    const auto res = step(s, 1e-3, g, 0.08, well);
    double stat = 0.0;
    for (int i = 0; i < g.nr; ++i)
      stat = std::max({stat, std::abs(res.state.c[i] + 1.0), std::abs(res.state.mu[i])});
    col.add("diffuse", "stationary_preserved", stat, 1e-12);

    const double eps = sc.cfg.eps_list.front();
    const ApproxField f = sc.field(eps);
    const RadialGrid rg = sc.diffuse_grid(eps);
    const double Tshort = std::min(cfg.T, 0.01);
    const auto hist = run(f, rg, eps, Tshort, cfg.dt0_factor * eps * eps * eps);
    double envio = 0.0;
    for (size_t i = 0; i + 1 < hist.energy.size(); ++i)
      envio = std::max(envio, hist.energy[i + 1] - hist.energy[i]);
    col.add("diffuse", "energy_dissipation", envio, 1e-12);

    const auto s1 = init_from_approx(f, rg);
    const auto r1 = step(s1, cfg.dt0_factor * eps * eps * eps, rg, eps, well);
    const double rate =
        (mass_of(r1.state.c, rg) - mass_of(s1.c, rg)) / (cfg.dt0_factor * eps * eps * eps);
    col.add("diffuse", "divergence_theorem",
            std::abs(rate - boundary_flux(r1.state.mu, rg)) /
                std::max(1.0, std::abs(rate)),
            1e-9);
  }

  if (col.wants("residuals")) {
    const std::vector<double> epss{0.08, 0.04, 0.02, 0.01};
    std::vector<double> vals;
    for (double e : epss) vals.push_back(2.5 * e * e);
    col.add("residuals", "fit_order_exact", std::abs(fit_order(epss, vals).slope - 2.0), 1e-12);

    auto fld = [](Vec2 x) { return std::sin(1.3 * x.x) * std::cos(0.7 * x.y); };
    auto lap = [&](Vec2 x, double h) {
      auto axis = [&](Vec2 e) {
        return (-fld(x + 2 * h * e) + 16 * fld(x + h * e) - 30 * fld(x) + 16 * fld(x - h * e) -
                fld(x - 2 * h * e)) /
               (12 * h * h);
      };
      return axis({1, 0}) + axis({0, 1});
    };
    const Vec2 x{0.4, 0.2};
    const double exact = -(1.3 * 1.3 + 0.7 * 0.7) * fld(x);
    const double e1 = std::abs(lap(x, 0.02) - exact), e2 = std::abs(lap(x, 0.01) - exact);
    col.add("residuals", "fd_observed_order", std::log2(e1 / e2), 3.5, true);
  }

  return col.rows;
}

int cmd_invariants(const ExperimentConfig& cfg, const std::string& filter, std::ostream& log,
                   const std::string& out_csv) {
  const auto rows = run_invariants(cfg, filter);
  bool all = true;
  for (const auto& r : rows) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-10s %-28s measured %12.5g threshold %10.3g : %s\n",
                  r.module.c_str(), r.name.c_str(), r.measured, r.threshold,
                  r.pass ? "PASS" : "FAIL");
    log << buf;
    all = all && r.pass;
  }
  if (!out_csv.empty()) {
    std::filesystem::create_directories(std::filesystem::path(out_csv).parent_path().empty()
                                            ? "."
                                            : std::filesystem::path(out_csv).parent_path().string());
    CsvWriter csv(out_csv);
    csv.header({"module", "name", "measured", "threshold", "pass"});
    for (const auto& r : rows)
      csv.row_strings({r.module, r.name, CsvWriter::num(r.measured), CsvWriter::num(r.threshold),
                       r.pass ? "1" : "0"});
  }
  log << (all ? "invariants: all passed\n" : "invariants: FAILURES present\n");
  return all ? 0 : 1;
}

}  // namespace mslab
