#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mslab {

// Flat key=value experiment configuration (one file per experiment).
struct ExperimentConfig {
  std::string scenario = "radial";
  double beta = 1.0;
  double alpha0 = 1.0;  // slip coefficient of the velocity wall condition;
                        // the radial reduction has v = 0, so it never enters
  double R0 = 1.0;
  double R_out = 2.0;
  double delta = 0.0;  // 0 = derive from the geometry
  std::vector<double> eps_list{0.08, 0.04, 0.02};
  double T = 0.05;
  double profile_half_width = 20.0;
  int profile_nodes = 4001;
  int eval_nr = 128;
  int eval_nt = 16;
  int nr_factor = 8;        // diffuse resolution: nodes per eps per unit length
  double dt0_factor = 10.0;  // dt0 = factor * eps^3
  std::uint64_t seed = 20240811ull;
  std::string out_dir = "out";

  double resolved_delta() const;
  void validate() const;
  std::string canonical() const;   // deterministic key=value dump
  std::uint64_t hash() const;      // FNV-1a of the canonical form

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_map(const std::map<std::string, std::string>& kv);
};

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed = 14695981039346656037ull);
std::uint64_t fnv1a_file(const std::string& path);

}  // namespace mslab
