#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mslab/spline.hpp"
#include "mslab/vec2.hpp"

namespace mslab {

// Scalar field on T^1 x time with the derivatives the surface operators need.
struct HField {
  std::function<double(double, double)> h;       // (s, t)
  std::function<double(double, double)> dh_ds;
  std::function<double(double, double)> d2h_ds2;
  std::function<double(double, double)> dh_dt;

  static HField zero();
  double operator()(double s, double t) const { return h(s, t); }
};

// C2 cutoff: 1 on |s| <= delta, 0 on |s| >= 2 delta, quintic blend between;
// satisfies 0 >= s xi'(s) >= -4 on the transition band.
double cutoff_xi(double s, double delta);
double cutoff_xi_prime(double s, double delta);

// Chart Jacobian in stretched coordinates: det D X relative to the
// on-curve area element along x = X0 + eps (rho + h) n.
inline double expansion_jacobian(double eps, double rho, double h_val, double kappa) {
  return 1.0 + eps * (rho + h_val) * kappa;
}

// Parametrized closed curve. Circles carry closed forms for everything; a
// general curve is a periodic cubic spline through sample points (oriented
// counterclockwise internally so the normal (0,-1;1,0) tau points inside).
class Curve {
 public:
  static Curve circle(Vec2 center, std::function<double(double)> radius,
                      std::function<double(double)> radius_rate);
  static Curve circle_const(Vec2 center, double radius);
  static Curve spline(const std::vector<Vec2>& points);

  bool is_circle() const { return kind_ == Kind::Circle; }
  Vec2 point(double s, double t) const;
  Vec2 tangent(double s, double t) const;  // unit
  Vec2 normal(double s, double t) const;   // (0,-1;1,0) tangent
  double speed(double s, double t) const;  // |ds X0|
  // curvature in the convention J = 1 + r kappa along X0 + r n (= Delta d_Gamma on Gamma)
  double kappa(double s, double t) const;
  double normal_velocity(double s, double t) const;  // V = dt X0 . n

  Vec2 center() const { return center_; }
  double radius(double t) const { return radius_(t); }
  double radius_rate(double t) const { return radius_rate_(t); }

  Vec2 spline_point(double s) const;
  Vec2 spline_d1(double s) const;
  Vec2 spline_d2(double s) const;

 private:
  enum class Kind { Circle, Spline };
  Kind kind_ = Kind::Circle;
  Vec2 center_{};
  std::function<double(double)> radius_, radius_rate_;
  std::shared_ptr<PeriodicSpline> sx_, sy_;
};

// Outer domain boundary with its signed distance d_B (negative inside).
struct DomainBoundary {
  enum class Kind { Disk, Square };
  Kind kind = Kind::Disk;
  Vec2 center{};
  double size = 2.0;  // disk radius or square half-width

  static DomainBoundary disk(double radius, Vec2 c = {});
  static DomainBoundary square(double half_width, Vec2 c = {});
  double sdist(Vec2 x) const;
};

struct StretchedPoint {
  double rho = 0.0;
  double s = 0.0;
  double d = 0.0;
  Vec2 x{};
};

// Tubular-neighborhood kernel around the moving curve. Immutable after
// construction; all evaluators are const.
class TubularChart {
 public:
  TubularChart(Curve curve, double delta, DomainBoundary domain,
               const std::vector<double>& t_check = {0.0});

  const Curve& curve() const { return curve_; }
  double delta() const { return delta_; }
  const DomainBoundary& domain() const { return domain_; }

  // signed distance to Gamma_t, positive inside Omega^+; its gradient is
  // the unit normal
  double signed_distance(Vec2 x, double t) const;
  // torus coordinate S(x,t) of the projection onto Gamma_t
  void project_and_s(Vec2 x, double t, double& s, Vec2& p) const;
  double S(Vec2 x, double t) const;

  Vec2 grad_S(Vec2 x, double t) const;
  double laplace_S(Vec2 x, double t) const;
  double dt_S(Vec2 x, double t) const;
  Vec2 normal_at(Vec2 x, double t) const;     // grad d_Gamma
  double laplace_d(Vec2 x, double t) const;   // = kappa / (1 + d kappa)
  double dt_d(Vec2 x, double t) const;        // = -V

  // surface operators of torus fields evaluated through S(x,t)
  double dt_gamma(const HField& h, Vec2 x, double t) const;
  Vec2 grad_gamma(const HField& h, Vec2 x, double t) const;
  double laplace_gamma(const HField& h, Vec2 x, double t) const;

  // stretched coordinates rho = d/eps - h(S,t) and their inverse map
  StretchedPoint stretch(Vec2 x, double t, double eps, const HField& h) const;
  Vec2 unstretch(double rho, double s, double t, double eps, const HField& h) const;

  bool in_chart(Vec2 x, double t, double width_factor = 2.0) const;

 private:
  void require_chart_local(Vec2 x, double t) const;
  Curve curve_;
  double delta_;
  DomainBoundary domain_;
};

}  // namespace mslab
