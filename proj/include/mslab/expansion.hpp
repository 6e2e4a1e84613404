#pragma once

#include <cstdint>
#include <vector>

#include "mslab/dwell.hpp"
#include "mslab/geometry.hpp"
#include "mslab/profiles.hpp"
#include "mslab/sharp.hpp"
#include "mslab/vec2.hpp"

namespace mslab {

// Chart whose curve is the evolving sharp-interface circle. The solution
// object must outlive the chart.
TubularChart chart_from_sharp(const SharpSolution& sharp, double delta,
                              const std::vector<double>& t_check = {});

double default_delta(double R0, double R_out);

// Outer expansion terms (order 0 and the forced order-1 concentration),
// extended across Gamma by constant-in-normal continuation.
struct OuterTerms {
  const SharpSolution* sharp = nullptr;
  const TubularChart* chart = nullptr;
  DoubleWell well;

  double mu_plus(Vec2 x, double t) const;
  double mu_minus(Vec2 x, double t) const;
  double c1_plus(Vec2 x, double t) const { return mu_plus(x, t) / well.d2f(1.0); }
  double c1_minus(Vec2 x, double t) const { return mu_minus(x, t) / well.d2f(-1.0); }
  double p0_plus(double t) const { return sharp->pressure_jump(t); }  // reference p0^- = 0
  double p0_minus() const { return 0.0; }
  Vec2 v0() const { return {}; }
};

// Inner expansion: order-0 fields and the solvability-projected order-1
// concentration. c1 is assembled from the precomputed basis responses of the
// linearized profile solver; by linearity this equals the direct per-point
// bordered solve.
struct InnerTerms {
  const OuterTerms* outer = nullptr;
  const ProfileSet* profiles = nullptr;
  const TubularChart* chart = nullptr;
  double g0_switch = 1e-4;  // |d_Gamma| below which the removable limit is used

  double mu0(double rho, Vec2 x, double t) const;  // mu+ eta + mu- (1 - eta)
  double c1(double rho, Vec2 x, double t) const;
  double g0(Vec2 x, double t) const;
  double l0(Vec2 x, double t) const;
  double p0(double rho, Vec2 x, double t) const;
  Vec2 v0() const { return {}; }

  // tabulated A^0 right hand side at a chart point (for the direct solve)
  std::vector<double> c1_rhs(Vec2 x, double t) const;
  double solvability_residual(Vec2 x, double t) const;
};

// Boundary-layer expansion at orders 0-1; c1B turns out z-independent.
struct BoundaryTerms {
  const OuterTerms* outer = nullptr;
  double c0B() const { return -1.0; }
  double c1B(double /*z*/, Vec2 x, double t) const { return outer->c1_minus(x, t); }
  double mu0B(Vec2 x, double t) const { return outer->mu_minus(x, t); }
  Vec2 v0B() const { return {}; }
  double p0B() const { return 0.0; }
};

struct FieldSample {
  double cA = 0, muA = 0, pA = 0;
  Vec2 vA{};
  double d_gamma = 0, rho = 0, d_bdry = 0;
};

// Glued approximate solution at truncation order
// c = O(eps), mu = v = p = O(1).
class ApproxField {
 public:
  ApproxField(double eps, const ProfileSet* ps, const SharpSolution* sharp,
              const TubularChart* chart, HField h_A = HField::zero());

  // the expansion-term views point back into this object
  ApproxField(const ApproxField&) = delete;
  ApproxField& operator=(const ApproxField&) = delete;

  double eps() const { return eps_; }
  const TubularChart& chart() const { return *chart_; }
  const OuterTerms& outer() const { return outer_; }
  const InnerTerms& inner() const { return inner_; }
  const BoundaryTerms& boundary() const { return bdry_; }
  const ProfileSet& profiles() const { return *ps_; }
  const SharpSolution& sharp() const { return *sharp_; }

  double c(Vec2 x, double t) const;
  double mu(Vec2 x, double t) const;
  Vec2 v(Vec2, double) const { return {}; }
  double p(Vec2 x, double t) const;
  FieldSample at(Vec2 x, double t) const;

  double rho(Vec2 x, double t) const;  // d/eps - h_A at the projection

  // structural decomposition pieces:
  // c_I = theta0(rho) + eps p_eps theta1(rho) + eps^2 q_eps
  double p_eps(Vec2 x, double t) const;
  double q_eps(Vec2 x, double t) const;

 private:
  double eps_;
  const ProfileSet* ps_;
  const SharpSolution* sharp_;
  const TubularChart* chart_;
  HField h_A_;
  OuterTerms outer_;
  InnerTerms inner_;
  BoundaryTerms bdry_;
};

ApproxField glue(double eps, const ProfileSet& ps, const SharpSolution& sharp,
                 const TubularChart& chart, HField h_A = HField::zero());

struct SpectralReport {
  double min_f2_outside = 0.0;      // inf f''(c_A) outside Gamma(delta)
  double sup_cA = 0.0;              // sup |c_A|
  double sup_grad_gamma_cA = 0.0;   // sup |grad^Gamma c_A| on the interface band
  double cstar_pq = 0.0;            // sup |p_eps| + eps/(eps+|d-eps h|) |q_eps|
  double theta1_orthogonality = 0.0;      // int theta1 theta0'^2 f'''(theta0), re-verified
  double decomposition_error = 0.0; // reconstruction error at the samples
  double sign_violation = 0.0;      // min of sign(d) * c_A^pm (must stay positive)
  Vec2 worst_f2_point{};
  bool pass() const;
  // throws CheckFailed naming the violated inequality when !pass()
  void require() const;
};

SpectralReport spectral_assumption_check(const ApproxField& field, double t, int n_samples,
                                         uint64_t seed);

}  // namespace mslab
