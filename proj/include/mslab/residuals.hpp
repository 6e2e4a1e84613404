#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mslab/diffuse.hpp"
#include "mslab/expansion.hpp"

namespace mslab {

enum class ResidualKind { rS, rDiv, rCH1, rCH2, rCH2Taylor };
enum class Stratum { Interface, Matching, Bulk, Collar };

std::string to_string(ResidualKind k);
std::string to_string(Stratum s);

// tensor (r, t) evaluation grid with trapezoid quadrature weights
struct EvalGrid {
  std::vector<double> rs, ts;
  std::vector<double> wr, wt;

  static EvalGrid radial(double R_out, double T, int nr = 128, int nt = 16,
                         double r_margin = 0.02);
  int nr() const { return static_cast<int>(rs.size()); }
  int nt() const { return static_cast<int>(ts.size()); }
};

struct FdScheme {
  double hx = 1e-3;  // 4th order central stencils in space
  double ht = 1e-4;  // 2nd order in time
  static FdScheme for_eps(double eps);
};

struct ResidualField {
  ResidualKind kind = ResidualKind::rCH1;
  EvalGrid grid;
  std::vector<double> values;  // t-major: values[j * nr + i]
  std::vector<Stratum> strata;

  double at(int j, int i) const { return values[static_cast<size_t>(j) * grid.nr() + i]; }
  Stratum stratum(int j, int i) const { return strata[static_cast<size_t>(j) * grid.nr() + i]; }
  double linf(std::optional<Stratum> s = std::nullopt) const;
  double l2(std::optional<Stratum> s = std::nullopt) const;  // 2 pi r dr dt measure
};

// Substitute the approximate fields into the PDE by finite differences
// (4th order in space, 2nd order in time).
ResidualField eval_residual(const ApproxField& field, ResidualKind kind, const EvalGrid& grid,
                            const FdScheme& fd);

// fixed family of smooth test functions with precomputed H1 norms
struct DictionaryEntry {
  std::string name;
  std::function<double(Vec2)> phi;
  std::function<Vec2(Vec2)> grad;
  std::function<double(double)> angular_mean;  // (1/2pi) circle average at radius r
  double h1 = 1.0;
};

struct Dictionary {
  std::vector<DictionaryEntry> entries;
  static Dictionary standard(double R_out);
};

// desk-scale dual-norm surrogate: max over the dictionary of
// int_t | int_Omega r phi dx | dt / ||phi||_H1
double weak_norm(const ResidualField& r, const Dictionary& dict);

struct FitResult {
  double slope = 0.0;
  double fit_residual = 0.0;
};

// OLS fit of log(norm) against log(eps); requires >= 3 strictly positive norms
FitResult fit_order(const std::vector<double>& eps_list, const std::vector<double>& norms);

struct ErrorNorms {
  double err_l2l2 = 0.0;           // ||R||_{L2(0,T;L2)}
  double err_grad_gamma = 0.0;     // ||grad^Gamma R||_{L2(Gamma(delta))} (0 radially)
  double err_grad_outside = 0.0;   // eps ||grad R||_{L2(outside Gamma(delta))}
  double err_l2_outside = 0.0;     // ||R||_{L2(outside Gamma(delta))}
  double err_dn_interface = 0.0;   // eps^{3/2} ||dn R||_{L2(Gamma(delta))}
  double err_hm1_sup = 0.0;        // sup_t dictionary dual norm (H^-1 surrogate)
  double err_energy = 0.0;         // int eps |grad R|^2 + f''(c_A) R^2 / eps
  double interface_sup = 0.0;      // sup_t |R_eps(t) - R(t)|
};

// R = c^eps - c_A on the diffuse grid; the history must carry snapshots at
// the requested times.
ErrorNorms error_norms(const DiffuseHistory& hist, const RadialGrid& rgrid,
                       const ApproxField& field, const Dictionary& dict,
                       const std::vector<double>& ts);

}  // namespace mslab
