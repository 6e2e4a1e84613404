// mslab: numerical laboratory for the radial sharp-interface limit of the
// Stokes/Cahn-Hilliard system. Subcommands cover the 1-D profile machinery,
// chart geometry checks, the exact radial sharp solver, the glued
// matched-asymptotic field, the radial diffuse solver, residual measurement
// and the full convergence study.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>

#include "mslab/csv.hpp"
#include "mslab/diffuse.hpp"
#include "mslab/error.hpp"
#include "mslab/expansion.hpp"
#include "mslab/manifest.hpp"
#include "mslab/profiles.hpp"
#include "mslab/residuals.hpp"
#include "mslab/runner.hpp"
#include "mslab/sharp.hpp"

namespace fs = std::filesystem;
using namespace mslab;

namespace {

int cmd_profile(double beta, double half_width, int nodes, const std::string& out) {
  const RhoGrid grid(half_width, nodes);
  const auto theta0 = solve_theta0(DoubleWell(beta), grid);
  CsvWriter csv(out);
  csv.header({"rho", "value", "derivative"});
  for (int i = 0; i < grid.n; ++i)
    csv.row_strings({CsvWriter::num(grid.node(i)), CsvWriter::num(theta0.values[i]),
                     CsvWriter::num(theta0.derivative[i])});
  std::cout << "profile: wrote " << out << " (decay rate " << theta0.decay_rate
            << ", residual " << theta0.residual_norm << ")\n";
  return 0;
}

int cmd_geometry_check(double R, double R_out, double delta, int samples, std::uint64_t seed,
                       const std::string& out) {
  if (delta <= 0.0) delta = default_delta(R, R_out);
  const auto rows = geometry_check(R, R_out, delta, samples, seed);
  bool all = true;
  if (!out.empty()) {
    CsvWriter csv(out);
    csv.header({"name", "samples", "max_abs", "tol", "pass"});
    for (const auto& r : rows)
      csv.row_strings({r.name, std::to_string(samples), CsvWriter::num(r.measured),
                       CsvWriter::num(r.threshold), r.pass ? "1" : "0"});
  }
  for (const auto& r : rows) {
    std::printf("%-28s max %12.5g tol %8.1g : %s\n", r.name.c_str(), r.measured, r.threshold,
                r.pass ? "PASS" : "FAIL");
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

int cmd_sharp(double R0, double R_out, double T, double beta, const std::string& out) {
  const auto ps = ProfileSet::build_default(beta);
  const auto sol = evolve_sharp(R0, R_out, ps.moments.sigma, T);
  CsvWriter csv(out);
  csv.header({"t", "R", "dRdt", "mu_interface"});
  for (size_t i = 0; i < sol.ts.size(); ++i)
    csv.row_strings({CsvWriter::num(sol.ts[i]), CsvWriter::num(sol.Rs[i]),
                     CsvWriter::num(sol.fs[i]), CsvWriter::num(sol.sigma / sol.Rs[i])});
  std::cout << "sharp: sigma = " << sol.sigma << ", R(T) = " << sol.Rs.back() << ", wrote "
            << out << "\n";
  return 0;
}

int cmd_approx(const ExperimentConfig& cfg, double eps, double t, int grid_n,
               const std::string& out) {
  const Scenario sc = Scenario::build(cfg);
  const ApproxField f = sc.field(eps);
  CsvWriter csv(out);
  csv.header({"x1", "x2", "d_gamma", "rho", "cA", "muA", "vA1", "vA2", "pA"});
  for (int i = 0; i < grid_n; ++i) {
    const double r = cfg.R_out * (i + 0.5) / grid_n;
    const auto s = f.at({r, 0.0}, t);
    csv.row_strings({CsvWriter::num(r), CsvWriter::num(0.0), CsvWriter::num(s.d_gamma),
                     CsvWriter::num(s.rho), CsvWriter::num(s.cA), CsvWriter::num(s.muA),
                     CsvWriter::num(s.vA.x), CsvWriter::num(s.vA.y), CsvWriter::num(s.pA)});
  }
  std::cout << "approx: wrote " << out << "\n";
  return 0;
}

int cmd_diffuse(const ExperimentConfig& cfg, double eps, int nr, int snapshots,
                const std::string& out_dir) {
  const Scenario sc = Scenario::build(cfg);
  const ApproxField f = sc.field(eps);
  RadialGrid grid = sc.diffuse_grid(eps);
  if (nr > 0) grid.nr = nr;
  std::vector<double> snap_ts;
  for (int k = 1; k <= snapshots; ++k) snap_ts.push_back(cfg.T * k / snapshots);
  const auto hist = run(f, grid, eps, cfg.T, cfg.dt0_factor * eps * eps * eps, snap_ts);

  fs::create_directories(out_dir);
  {
    CsvWriter csv((fs::path(out_dir) / "history.csv").string());
    csv.header({"t", "R_eps", "energy", "mass"});
    for (size_t i = 0; i < hist.ts.size(); ++i)
      csv.row_strings({CsvWriter::num(hist.ts[i]), CsvWriter::num(hist.R_eps[i]),
                       CsvWriter::num(hist.energy[i]), CsvWriter::num(hist.mass[i])});
  }
  for (size_t k = 0; k < hist.snapshots.size(); ++k) {
    CsvWriter csv((fs::path(out_dir) / ("snapshot_" + std::to_string(k) + ".csv")).string());
    csv.header({"r", "c", "mu"});
    for (int i = 0; i < grid.nr; ++i)
      csv.row_strings({CsvWriter::num(grid.r(i)), CsvWriter::num(hist.snapshots[k].c[i]),
                       CsvWriter::num(hist.snapshots[k].mu[i])});
  }
  std::cout << "diffuse: " << hist.accepted << " accepted / " << hist.rejected
            << " rejected steps, R_eps(T) = " << hist.R_eps.back() << ", wrote " << out_dir
            << "\n";
  return 0;
}

int cmd_residuals(const ExperimentConfig& cfg, int threads, const std::string& out_dir) {
  ExperimentConfig c = cfg;
  c.out_dir = out_dir;
  return cmd_converge(c, true, threads, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mslab: radial Stokes/Cahn-Hilliard sharp-interface laboratory"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags are accepted after the subcommand name

  std::string config_path, out_override;
  bool force = false;
  int threads = 3;
  app.add_option("--config", config_path, "experiment config file (key=value lines)");
  app.add_option("--out", out_override, "output directory override");
  app.add_flag("--force", force, "rerun even when the manifest is up to date");
  app.add_option("--threads", threads, "parallel pipelines across eps values");

  // profile
  auto* profile = app.add_subcommand("profile", "solve the optimal profile ODE");
  double p_beta = 1.0, p_L = 20.0;
  int p_n = 4001;
  std::string p_out = "profile.csv";
  profile->add_option("--beta", p_beta);
  profile->add_option("--half-width", p_L);
  profile->add_option("--nodes", p_n);
  profile->add_option("--out", p_out);

  // geometry-check
  auto* geo = app.add_subcommand("geometry-check", "chart identity battery on a circle");
  std::string g_scenario = "circle";
  double g_R = 1.0, g_Rout = 2.0, g_delta = 0.0;
  int g_samples = 1000;
  std::string g_out;
  geo->add_option("--scenario", g_scenario);
  geo->add_option("--R", g_R);
  geo->add_option("--Rout", g_Rout);
  geo->add_option("--delta", g_delta);
  geo->add_option("--samples", g_samples);
  geo->add_option("--out", g_out);

  // sharp
  auto* sharp = app.add_subcommand("sharp", "exact radial sharp-interface evolution");
  double s_R0 = 1.0, s_Rout = 2.0, s_T = 0.1, s_beta = 1.0;
  std::string s_out = "sharp.csv";
  sharp->add_option("--R0", s_R0);
  sharp->add_option("--Rout", s_Rout);
  sharp->add_option("--T", s_T);
  sharp->add_option("--beta", s_beta);
  sharp->add_option("--out", s_out);

  // approx
  auto* approx = app.add_subcommand("approx", "evaluate the glued approximate solution");
  double a_eps = 0.05, a_t = 0.0;
  int a_grid = 512;
  std::string a_scenario = "radial", a_out = "approx.csv";
  approx->add_option("--eps", a_eps);
  approx->add_option("--scenario", a_scenario);
  approx->add_option("--t", a_t);
  approx->add_option("--grid", a_grid);
  approx->add_option("--out", a_out);

  // diffuse
  auto* diffuse = app.add_subcommand("diffuse", "radial Cahn-Hilliard run");
  double d_eps = 0.04, d_R0 = 1.0, d_Rout = 2.0, d_T = 0.05;
  int d_nr = 0, d_snapshots = 5;
  std::string d_out = "run";
  diffuse->add_option("--eps", d_eps);
  diffuse->add_option("--R0", d_R0);
  diffuse->add_option("--Rout", d_Rout);
  diffuse->add_option("--T", d_T);
  diffuse->add_option("--nr", d_nr);
  diffuse->add_option("--snapshots", d_snapshots);
  diffuse->add_option("--out", d_out);

  // residuals
  auto* resid = app.add_subcommand("residuals", "residual norms and fitted orders");
  std::string r_eps_list = "0.08,0.04,0.02", r_scenario = "radial", r_out = "report";
  double r_T = 0.05;
  resid->add_option("--eps-list", r_eps_list);
  resid->add_option("--scenario", r_scenario);
  resid->add_option("--T", r_T);
  resid->add_option("--out", r_out);

  // converge / invariants
  auto* converge = app.add_subcommand("converge", "full convergence study with gates");
  auto* inv = app.add_subcommand("invariants", "machine-readable invariant table");
  std::string i_filter, i_out;
  inv->add_option("--filter", i_filter, "restrict to one module");
  inv->add_option("--out", i_out, "also write a CSV table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = ExperimentConfig::from_file(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;

    if (profile->parsed()) return cmd_profile(p_beta, p_L, p_n, p_out);
    if (geo->parsed()) {
      if (g_scenario != "circle") throw NumericalError("geometry-check: unsupported scenario");
      return cmd_geometry_check(g_R, g_Rout, g_delta, g_samples, cfg.seed, g_out);
    }
    if (sharp->parsed()) return cmd_sharp(s_R0, s_Rout, s_T, s_beta, s_out);
    if (approx->parsed()) {
      if (a_scenario != "radial") throw NumericalError("approx: unsupported scenario");
      return cmd_approx(cfg, a_eps, a_t, a_grid, a_out);
    }
    if (diffuse->parsed()) {
      ExperimentConfig c = cfg;
      c.R0 = d_R0;
      c.R_out = d_Rout;
      c.T = d_T;
      return cmd_diffuse(c, d_eps, d_nr, d_snapshots, d_out);
    }
    if (resid->parsed()) {
      if (r_scenario != "radial") throw NumericalError("residuals: unsupported scenario");
      ExperimentConfig c = cfg;
      c.T = r_T;
      c.eps_list.clear();
      std::stringstream ss(r_eps_list);
      std::string tok;
      while (std::getline(ss, tok, ',')) c.eps_list.push_back(std::stod(tok));
      return cmd_residuals(c, threads, r_out);
    }
    if (converge->parsed()) return cmd_converge(cfg, force, threads, std::cout);
    if (inv->parsed()) return cmd_invariants(cfg, i_filter, std::cout, i_out);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
