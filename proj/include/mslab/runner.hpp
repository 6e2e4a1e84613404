#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mslab/config.hpp"
#include "mslab/diffuse.hpp"
#include "mslab/expansion.hpp"
#include "mslab/profiles.hpp"
#include "mslab/residuals.hpp"
#include "mslab/sharp.hpp"

namespace mslab {

// Shared per-experiment state: profiles, sharp solution, chart, dictionary.
// The sharp solution sits behind a stable pointer because the chart's moving
// circle closes over its address.
struct Scenario {
  ExperimentConfig cfg;
  ProfileSet profiles;
  std::unique_ptr<SharpSolution> sharp;
  std::unique_ptr<TubularChart> chart;
  Dictionary dict;

  static Scenario build(const ExperimentConfig& cfg);
  ApproxField field(double eps) const;
  EvalGrid eval_grid(double eps) const;   // per-eps resolved residual grid
  RadialGrid diffuse_grid(double eps) const;
};

// One epsilon of the convergence study.
struct EpsReport {
  double eps = 0.0;
  // flattened norm table: (which, stratum, norm) -> value
  std::vector<std::tuple<std::string, std::string, std::string, double>> norms;
  ErrorNorms errors;
  bool energy_monotone = false;
  double boundary_defect = 0.0;  // max |c_A + 1|, |mu_A| on wall samples
  double min_f2_outside = 0.0;
  double pq_bound = 0.0;
  long accepted_steps = 0;
};

EpsReport run_pipeline(const Scenario& sc, double eps);

struct Gate {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool is_lower_bound = true;  // pass iff measured >= threshold (else <=)
  bool pass = false;
};

struct ConvergeResult {
  std::vector<EpsReport> reports;
  std::vector<std::tuple<std::string, double, double>> orders;  // name, slope, fit rms
  std::vector<Gate> gates;
  bool all_pass() const;
};

ConvergeResult run_converge(const Scenario& sc, int threads);

// Full converge command: idempotence via the manifest, CSV + summary +
// gnuplot outputs. Returns the process exit code (0 ok, 1 gate failure).
int cmd_converge(const ExperimentConfig& cfg, bool force, int threads, std::ostream& log);

struct InvariantResult {
  std::string module;
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

std::vector<InvariantResult> run_invariants(const ExperimentConfig& cfg,
                                            const std::string& filter);
int cmd_invariants(const ExperimentConfig& cfg, const std::string& filter, std::ostream& log,
                   const std::string& out_csv = "");

// geometry-check subcommand: FD identity battery on a circle chart.
std::vector<InvariantResult> geometry_check(double R, double R_out, double delta, int samples,
                                            std::uint64_t seed);

}  // namespace mslab
