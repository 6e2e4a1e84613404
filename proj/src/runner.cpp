#include "mslab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <random>

#include "mslab/csv.hpp"
#include "mslab/error.hpp"
#include "mslab/manifest.hpp"
#include "mslab/numerics.hpp"

namespace fs = std::filesystem;

namespace mslab {

Scenario Scenario::build(const ExperimentConfig& cfg) {
  cfg.validate();
  Scenario sc{cfg,
              ProfileSet::build(cfg.beta, RhoGrid(cfg.profile_half_width, cfg.profile_nodes)),
              nullptr,
              nullptr,
              {}};
  sc.sharp = std::make_unique<SharpSolution>(
      evolve_sharp(cfg.R0, cfg.R_out, sc.profiles.moments.sigma, cfg.T));
  sc.chart = std::make_unique<TubularChart>(
      chart_from_sharp(*sc.sharp, cfg.resolved_delta(), {0.0, cfg.T}));
  sc.dict = Dictionary::standard(cfg.R_out);
  return sc;
}

ApproxField Scenario::field(double eps) const {
  return glue(eps, profiles, *sharp, *chart);
}

EvalGrid Scenario::eval_grid(double eps) const {
  // the sweep needs the localized interface residual resolved in quadrature
  const int nr = std::max(cfg.eval_nr, static_cast<int>(std::ceil(16.0 * cfg.R_out / eps)));
  return EvalGrid::radial(cfg.R_out, cfg.T, nr, cfg.eval_nt);
}

RadialGrid Scenario::diffuse_grid(double eps) const {
  const int nr = static_cast<int>(std::ceil(cfg.nr_factor * cfg.R_out / eps)) + 1;
  return RadialGrid{cfg.R_out, nr};
}

EpsReport run_pipeline(const Scenario& sc, double eps) {
  EpsReport rep;
  rep.eps = eps;
  const ApproxField field = sc.field(eps);
  const EvalGrid grid = sc.eval_grid(eps);
  const FdScheme fd = FdScheme::for_eps(eps);

  for (ResidualKind kind : {ResidualKind::rS, ResidualKind::rDiv, ResidualKind::rCH1,
                            ResidualKind::rCH2, ResidualKind::rCH2Taylor}) {
    const ResidualField r = eval_residual(field, kind, grid, fd);
    const std::string which = to_string(kind);
    for (Stratum s : {Stratum::Interface, Stratum::Matching, Stratum::Bulk, Stratum::Collar}) {
      rep.norms.emplace_back(which, to_string(s), "L2", r.l2(s));
      rep.norms.emplace_back(which, to_string(s), "Linf", r.linf(s));
    }
    rep.norms.emplace_back(which, "all", "L2", r.l2());
    rep.norms.emplace_back(which, "all", "Linf", r.linf());
    if (kind == ResidualKind::rCH1)
      rep.norms.emplace_back(which, "all", "weak", weak_norm(r, sc.dict));
  }

  // diffuse run with snapshots at the residual time nodes
  const RadialGrid rgrid = sc.diffuse_grid(eps);
  const double dt0 = sc.cfg.dt0_factor * eps * eps * eps;
  const DiffuseHistory hist = run(field, rgrid, eps, sc.cfg.T, dt0, grid.ts);
  rep.accepted_steps = hist.accepted;
  rep.energy_monotone = true;
  for (size_t i = 0; i + 1 < hist.energy.size(); ++i)
    if (hist.energy[i + 1] > hist.energy[i] + 1e-12 * (1.0 + std::abs(hist.energy[i])))
      rep.energy_monotone = false;

  rep.errors = error_norms(hist, rgrid, field, sc.dict, grid.ts);
  rep.norms.emplace_back("error", "all", "err_L2L2", rep.errors.err_l2l2);
  rep.norms.emplace_back("error", "interface", "err_gradGamma", rep.errors.err_grad_gamma);
  rep.norms.emplace_back("error", "outside", "err_grad_outside", rep.errors.err_grad_outside);
  rep.norms.emplace_back("error", "outside", "err_L2_outside", rep.errors.err_l2_outside);
  rep.norms.emplace_back("error", "interface", "err_dn_interface", rep.errors.err_dn_interface);
  rep.norms.emplace_back("error", "all", "err_Hm1_sup", rep.errors.err_hm1_sup);
  rep.norms.emplace_back("error", "all", "err_energy", rep.errors.err_energy);
  rep.norms.emplace_back("error", "all", "interface_sup", rep.errors.interface_sup);

  // paired integral | int int rCH2 (c_eps - c_A) | diagnostic
  {
    const ResidualField rch2 = eval_residual(field, ResidualKind::rCH2, grid, fd);
    double paired = 0.0;
    for (int j = 0; j < grid.nt(); ++j) {
      const RadialState& snap = hist.snapshots[j];
      double inner = 0.0;
      for (int i = 0; i < grid.nr(); ++i) {
        const double r = grid.rs[i];
        // interpolate the diffuse solution onto the eval node
        const double u = r / rgrid.h();
        const int i0 = std::min(static_cast<int>(u), rgrid.nr - 2);
        const double w = u - i0;
        const double ce = snap.c[i0] * (1 - w) + snap.c[i0 + 1] * w;
        const double R = ce - field.c({r, 0.0}, snap.t);
        inner += grid.wr[i] * 2.0 * kPi * r * rch2.at(j, i) * R;
      }
      paired += grid.wt[j] * std::abs(inner);
    }
    rep.norms.emplace_back("rCH2", "all", "paired_R", paired);
  }

  // boundary exactness on wall samples over the run times
  for (double t : grid.ts) {
    for (int k = 0; k < 16; ++k) {
      const double a = 2.0 * kPi * k / 16;
      const Vec2 x{sc.cfg.R_out * std::cos(a), sc.cfg.R_out * std::sin(a)};
      rep.boundary_defect = std::max(rep.boundary_defect, std::abs(field.c(x, t) + 1.0));
      rep.boundary_defect = std::max(rep.boundary_defect, std::abs(field.mu(x, t)));
    }
  }

  const SpectralReport sr = spectral_assumption_check(field, sc.cfg.T / 2.0, 4000, sc.cfg.seed);
  rep.min_f2_outside = sr.min_f2_outside;
  rep.pq_bound = sr.cstar_pq;
  return rep;
}

namespace {

double find_norm(const EpsReport& r, const std::string& which, const std::string& stratum,
                 const std::string& norm) {
  for (const auto& [w, s, n, v] : r.norms)
    if (w == which && s == stratum && n == norm) return v;
  throw NumericalError("missing norm " + which + "/" + stratum + "/" + norm);
}

}  // namespace

bool ConvergeResult::all_pass() const {
  return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.pass; });
}

ConvergeResult run_converge(const Scenario& sc, int threads) {
  if (sc.cfg.eps_list.size() < 3)
    throw DegenerateFit("converge: need at least 3 eps values for order fits");
  ConvergeResult out;
  out.reports.resize(sc.cfg.eps_list.size());

  // independent per-eps pipelines
  threads = std::max(1, threads);
  size_t next = 0;
  while (next < sc.cfg.eps_list.size()) {
    const size_t batch = std::min<size_t>(threads, sc.cfg.eps_list.size() - next);
    std::vector<std::future<EpsReport>> futs;
    for (size_t b = 0; b < batch; ++b) {
      const double eps = sc.cfg.eps_list[next + b];
      futs.push_back(std::async(std::launch::async, [&sc, eps] { return run_pipeline(sc, eps); }));
    }
    for (size_t b = 0; b < batch; ++b) out.reports[next + b] = futs[b].get();
    next += batch;
  }

  const std::vector<double>& epss = sc.cfg.eps_list;
  auto fit_named = [&](const std::string& name, const std::string& which,
                       const std::string& stratum, const std::string& norm) {
    std::vector<double> vals;
    for (const auto& r : out.reports) vals.push_back(find_norm(r, which, stratum, norm));
    const FitResult f = fit_order(epss, vals);
    out.orders.emplace_back(name, f.slope, f.fit_residual);
    return f.slope;
  };

  const double s_iface = fit_named("interface_sup", "error", "all", "interface_sup");
  const double s_bulk = fit_named("rCH2_bulk_Linf", "rCH2", "bulk", "Linf");
  const double s_rci = fit_named("rCH2_interface_L2", "rCH2", "interface", "L2");
  const double s_weak = fit_named("rCH1_weak", "rCH1", "all", "weak");
  fit_named("err_L2L2", "error", "all", "err_L2L2");
  fit_named("err_Hm1_sup", "error", "all", "err_Hm1_sup");
  fit_named("rCH2_taylor_bulk_Linf", "rCH2_taylor", "bulk", "Linf");

  double rdiv_max = 0.0, bdry = 0.0, min_f2 = 1e300, pq = 0.0;
  bool energy_ok = true;
  for (const auto& r : out.reports) {
    rdiv_max = std::max(rdiv_max, find_norm(r, "rdiv", "all", "Linf"));
    bdry = std::max(bdry, r.boundary_defect);
    min_f2 = std::min(min_f2, r.min_f2_outside);
    pq = std::max(pq, r.pq_bound);
    energy_ok = energy_ok && r.energy_monotone;
  }

  auto gate = [&](const std::string& name, double measured, double threshold, bool lower) {
    out.gates.push_back(
        {name, measured, threshold, lower, lower ? measured >= threshold : measured <= threshold});
  };
  gate("interface_sup_slope", s_iface, 0.9, true);
  gate("rCH2_bulk_Linf_slope", s_bulk, 1.8, true);
  gate("rCH2_interface_L2_slope", s_rci, 0.9, true);
  gate("rdiv_max", rdiv_max, 1e-12, false);
  gate("rCH1_weak_slope", s_weak, 0.9, true);
  gate("boundary_defect", bdry, 1e-12, false);
  gate("min_f2_outside", min_f2, 1.0, true);
  gate("pq_bound_finite", std::isfinite(pq) ? 1.0 : 0.0, 1.0, true);
  gate("energy_monotone", energy_ok ? 1.0 : 0.0, 1.0, true);
  return out;
}

int cmd_converge(const ExperimentConfig& cfg, bool force, int threads, std::ostream& log) {
  cfg.validate();
  fs::create_directories(cfg.out_dir);
  if (!force) {
    if (auto m = RunManifest::load(cfg.out_dir)) {
      if (m->config_hash == cfg.hash() && m->intact(cfg.out_dir)) {
        log << "converge: output is up to date (config hash " << cfg.hash()
            << "); use --force to rerun\n";
        return 0;
      }
    }
  }

  const Scenario sc = Scenario::build(cfg);
  const ConvergeResult res = run_converge(sc, threads);

  RunManifest man;
  man.config_hash = cfg.hash();
  man.stages["profiles"] = "ok";
  man.stages["sharp"] = "ok";
  man.stages["pipeline"] = "ok";

  {
    CsvWriter csv((fs::path(cfg.out_dir) / "norms.csv").string());
    csv.header({"eps", "which", "stratum", "norm", "value"});
    for (const auto& r : res.reports)
      for (const auto& [w, s, n, v] : r.norms)
        csv.row_strings({CsvWriter::num(r.eps), w, s, n, CsvWriter::num(v)});
  }
  {
    CsvWriter csv((fs::path(cfg.out_dir) / "orders.csv").string());
    csv.header({"name", "slope", "fit_residual"});
    for (const auto& [name, slope, rms] : res.orders)
      csv.row_strings({name, CsvWriter::num(slope), CsvWriter::num(rms)});
  }
  {
    std::ofstream sum(fs::path(cfg.out_dir) / "summary.txt");
    sum << "mslab convergence study (tool " << kToolVersion << ")\n";
    sum << "config hash: " << cfg.hash() << "\n";
    sum << "H^-1 norms use the fixed test-function dictionary surrogate\n\n";
    sum << "eps sweep:";
    for (double e : cfg.eps_list) sum << ' ' << e;
    sum << "\n\nfitted orders:\n";
    for (const auto& [name, slope, rms] : res.orders) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "  %-28s slope %+8.4f (fit rms %.4f)\n", name.c_str(), slope,
                    rms);
      sum << buf;
    }
    sum << "\ngates:\n";
    for (const auto& g : res.gates) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "  %-28s measured %12.5g %s %g : %s\n", g.name.c_str(),
                    g.measured, g.is_lower_bound ? ">=" : "<=", g.threshold,
                    g.pass ? "PASS" : "FAIL");
      sum << buf;
    }
    sum << "\noverall: " << (res.all_pass() ? "PASS" : "FAIL") << "\n";
  }
  {
    std::ofstream gp(fs::path(cfg.out_dir) / "plots.gp");
    gp << "# gnuplot script for the convergence study\n"
          "set datafile separator ','\n"
          "set logscale xy\n"
          "set xlabel 'eps'\n"
          "set key left top\n"
          "set terminal pngcairo size 900,600\n"
          "set output 'interface_error.png'\n"
          "plot '< grep \",error,all,interface_sup,\" norms.csv' using 1:5 with linespoints "
          "title 'sup_t |R_eps - R|'\n"
          "set output 'residual_norms.png'\n"
          "plot '< grep \",rCH2,bulk,Linf,\" norms.csv' using 1:5 with linespoints title "
          "'rCH2 bulk Linf', \\\n"
          "     '< grep \",rCH2,interface,L2,\" norms.csv' using 1:5 with linespoints title "
          "'rCH2 interface L2', \\\n"
          "     '< grep \",rCH1,all,weak,\" norms.csv' using 1:5 with linespoints title "
          "'rCH1 weak'\n";
  }

  man.add_file(cfg.out_dir, "norms.csv");
  man.add_file(cfg.out_dir, "orders.csv");
  man.add_file(cfg.out_dir, "summary.txt");
  man.add_file(cfg.out_dir, "plots.gp");
  man.write(cfg.out_dir);

  for (const auto& g : res.gates)
    log << (g.pass ? "PASS " : "FAIL ") << g.name << " (measured " << g.measured << ", "
        << (g.is_lower_bound ? ">= " : "<= ") << g.threshold << ")\n";
  log << (res.all_pass() ? "converge: all gates passed\n"
                         : "converge: at least one gate failed (see summary.txt)\n");
  return res.all_pass() ? 0 : 1;
}

}  // namespace mslab
