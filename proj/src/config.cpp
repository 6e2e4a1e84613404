#include "mslab/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mslab/error.hpp"
#include "mslab/expansion.hpp"

namespace mslab {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NumericalError("fnv1a_file: cannot open " + path);
  std::uint64_t h = 14695981039346656037ull;
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof buf);
    h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
  }
  return h;
}

double ExperimentConfig::resolved_delta() const {
  return delta > 0.0 ? delta : default_delta(R0, R_out);
}

void ExperimentConfig::validate() const {
  if (scenario != "radial")
    throw NumericalError("config: unsupported scenario '" + scenario + "'");
  if (!(beta > 0.0)) throw NumericalError("config: beta must be positive");
  if (!(alpha0 > 0.0)) throw NumericalError("config: alpha0 must be positive");
  if (!(R0 > 0.0) || !(R_out > R0)) throw NumericalError("config: need 0 < R0 < R_out");
  if (!(T > 0.0)) throw NumericalError("config: T must be positive");
  const double d = resolved_delta();
  if (R_out - R0 <= 5.0 * d)
    throw SeparationViolated("config: dist(Gamma_0, boundary) = " + std::to_string(R_out - R0) +
                             " violates the 5*delta separation (5*delta = " +
                             std::to_string(5.0 * d) + ")");
  if (R0 <= 3.0 * d)
    throw SeparationViolated("config: R0 below 3*delta; the chart projection degenerates");
  if (eps_list.empty()) throw NumericalError("config: empty eps list");
  for (size_t i = 0; i + 1 < eps_list.size(); ++i)
    if (!(eps_list[i] > eps_list[i + 1]))
      throw NumericalError("config: eps list must be strictly decreasing");
  for (double e : eps_list)
    if (!(e > 0.0) || e >= 1.0) throw NumericalError("config: eps values must lie in (0,1)");
  if (nr_factor < 8) throw NumericalError("config: nr_factor below the 8-per-eps resolution rule");
  if (profile_nodes < 101 || profile_nodes % 2 == 0)
    throw NumericalError("config: profile_nodes must be odd and >= 101");
}

std::string ExperimentConfig::canonical() const {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "scenario=" << scenario << '\n';
  os << "beta=" << num(beta) << '\n';
  os << "alpha0=" << num(alpha0) << '\n';
  os << "R0=" << num(R0) << '\n';
  os << "Rout=" << num(R_out) << '\n';
  os << "delta=" << num(delta) << '\n';
  os << "eps=";
  for (size_t i = 0; i < eps_list.size(); ++i) os << (i ? "," : "") << num(eps_list[i]);
  os << '\n';
  os << "T=" << num(T) << '\n';
  os << "profile_half_width=" << num(profile_half_width) << '\n';
  os << "profile_nodes=" << profile_nodes << '\n';
  os << "eval_nr=" << eval_nr << '\n';
  os << "eval_nt=" << eval_nt << '\n';
  os << "nr_factor=" << nr_factor << '\n';
  os << "dt0_factor=" << num(dt0_factor) << '\n';
  os << "seed=" << seed << '\n';
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const {
  const std::string c = canonical();
  return fnv1a(c.data(), c.size());
}

ExperimentConfig ExperimentConfig::from_map(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  auto getd = [&](const char* k, double& v) {
    auto it = kv.find(k);
    if (it != kv.end()) v = std::stod(it->second);
  };
  auto geti = [&](const char* k, int& v) {
    auto it = kv.find(k);
    if (it != kv.end()) v = std::stoi(it->second);
  };
  if (auto it = kv.find("scenario"); it != kv.end()) cfg.scenario = it->second;
  getd("beta", cfg.beta);
  getd("alpha0", cfg.alpha0);
  getd("R0", cfg.R0);
  getd("Rout", cfg.R_out);
  getd("delta", cfg.delta);
  getd("T", cfg.T);
  getd("profile_half_width", cfg.profile_half_width);
  getd("dt0_factor", cfg.dt0_factor);
  geti("profile_nodes", cfg.profile_nodes);
  geti("eval_nr", cfg.eval_nr);
  geti("eval_nt", cfg.eval_nt);
  geti("nr_factor", cfg.nr_factor);
  if (auto it = kv.find("seed"); it != kv.end()) cfg.seed = std::stoull(it->second);
  if (auto it = kv.find("out"); it != kv.end()) cfg.out_dir = it->second;
  if (auto it = kv.find("eps"); it != kv.end()) {
    cfg.eps_list.clear();
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) cfg.eps_list.push_back(std::stod(tok));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NumericalError("config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = val;
  }
  return from_map(kv);
}

}  // namespace mslab
