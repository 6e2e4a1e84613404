#include "mslab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mslab/error.hpp"
#include "mslab/numerics.hpp"

namespace mslab {

HField HField::zero() {
  auto z = [](double, double) { return 0.0; };
  return HField{z, z, z, z};
}

namespace {
double smoothstep5(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}
double smoothstep5_prime(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 30.0 * u * u * (1.0 - u) * (1.0 - u);
}
}  // namespace

double cutoff_xi(double s, double delta) {
  const double a = std::abs(s);
  if (a <= delta) return 1.0;
  if (a >= 2.0 * delta) return 0.0;
  return 1.0 - smoothstep5((a - delta) / delta);
}

double cutoff_xi_prime(double s, double delta) {
  const double a = std::abs(s);
  if (a <= delta || a >= 2.0 * delta) return 0.0;
  const double d = -smoothstep5_prime((a - delta) / delta) / delta;
  return s >= 0.0 ? d : -d;
}

Curve Curve::circle(Vec2 center, std::function<double(double)> radius,
                    std::function<double(double)> radius_rate) {
  Curve c;
  c.kind_ = Kind::Circle;
  c.center_ = center;
  c.radius_ = std::move(radius);
  c.radius_rate_ = std::move(radius_rate);
  return c;
}

Curve Curve::circle_const(Vec2 center, double radius) {
  return circle(center, [radius](double) { return radius; }, [](double) { return 0.0; });
}

Curve Curve::spline(const std::vector<Vec2>& points) {
  if (points.size() < 4) throw NumericalError("Curve::spline: need at least 4 points");
  // orient counterclockwise so that n = (0,-1;1,0) tau points into the inside
  double area2 = 0.0;
  const int m = static_cast<int>(points.size());
  for (int i = 0; i < m; ++i) {
    const Vec2 a = points[i], b = points[(i + 1) % m];
    area2 += a.x * b.y - b.x * a.y;
  }
  std::vector<double> xs(m), ys(m);
  for (int i = 0; i < m; ++i) {
    const Vec2 p = area2 >= 0.0 ? points[i] : points[m - 1 - i];
    xs[i] = p.x;
    ys[i] = p.y;
  }
  Curve c;
  c.kind_ = Kind::Spline;
  c.sx_ = std::make_shared<PeriodicSpline>(std::move(xs));
  c.sy_ = std::make_shared<PeriodicSpline>(std::move(ys));
  // simple-curve and regular-parametrization sanity on sample points
  const int ns = 256;
  for (int i = 0; i < ns; ++i) {
    const double s = static_cast<double>(i) / ns;
    if (norm(c.spline_d1(s)) < 1e-10)
      throw NumericalError("Curve::spline: vanishing tangent at s = " + std::to_string(s));
    for (int j = i + 1; j < ns; ++j) {
      double ds = std::abs(static_cast<double>(j - i)) / ns;
      ds = std::min(ds, 1.0 - ds);
      if (ds < 0.15) continue;
      const double dist = norm(c.spline_point(s) - c.spline_point(static_cast<double>(j) / ns));
      if (dist < 1e-9) throw NumericalError("Curve::spline: curve is not simple");
    }
  }
  return c;
}

Vec2 Curve::spline_point(double s) const { return {sx_->value(s), sy_->value(s)}; }
Vec2 Curve::spline_d1(double s) const { return {sx_->deriv(s), sy_->deriv(s)}; }
Vec2 Curve::spline_d2(double s) const { return {sx_->deriv2(s), sy_->deriv2(s)}; }

Vec2 Curve::point(double s, double t) const {
  if (kind_ == Kind::Circle) {
    const double a = 2.0 * kPi * s, r = radius_(t);
    return {center_.x + r * std::cos(a), center_.y + r * std::sin(a)};
  }
  return spline_point(s);
}

Vec2 Curve::tangent(double s, double t) const {
  if (kind_ == Kind::Circle) {
    const double a = 2.0 * kPi * s;
    return {-std::sin(a), std::cos(a)};
  }
  (void)t;
  Vec2 d = spline_d1(s);
  const double sp = norm(d);
  return {d.x / sp, d.y / sp};
}

Vec2 Curve::normal(double s, double t) const { return perp(tangent(s, t)); }

double Curve::speed(double s, double t) const {
  if (kind_ == Kind::Circle) return 2.0 * kPi * radius_(t);
  return norm(spline_d1(s));
}

double Curve::kappa(double s, double t) const {
  if (kind_ == Kind::Circle) return -1.0 / radius_(t);
  const Vec2 d1 = spline_d1(s), d2 = spline_d2(s);
  const double sp = norm(d1);
  // parametric curvature of the ccw curve; the Jacobian convention flips it
  return -(d1.x * d2.y - d1.y * d2.x) / (sp * sp * sp);
}

double Curve::normal_velocity(double s, double t) const {
  if (kind_ == Kind::Circle) {
    // dt X0 = R'(t) (cos, sin), n = -(cos, sin)
    return -radius_rate_(t);
  }
  (void)s;
  return 0.0;  // static spline curves
}

DomainBoundary DomainBoundary::disk(double radius, Vec2 c) {
  return {Kind::Disk, c, radius};
}
DomainBoundary DomainBoundary::square(double half_width, Vec2 c) {
  return {Kind::Square, c, half_width};
}

double DomainBoundary::sdist(Vec2 x) const {
  const Vec2 r = x - center;
  if (kind == Kind::Disk) return norm(r) - size;
  return std::max(std::abs(r.x), std::abs(r.y)) - size;
}

TubularChart::TubularChart(Curve curve, double delta, DomainBoundary domain,
                           const std::vector<double>& t_check)
    : curve_(std::move(curve)), delta_(delta), domain_(domain) {
  if (!(delta_ > 0.0)) throw NumericalError("TubularChart: delta must be positive");
  for (double t : t_check) {
    double min_bdry = 1e300, min_reach = 1e300;
    const int ns = 128;
    for (int i = 0; i < ns; ++i) {
      const double s = static_cast<double>(i) / ns;
      const Vec2 p = curve_.point(s, t);
      min_bdry = std::min(min_bdry, std::abs(domain_.sdist(p)));
      // projection stays well defined within 3 delta of the curve
      min_reach = std::min(min_reach, std::abs(1.0 / curve_.kappa(s, t)));
    }
    if (min_bdry <= 5.0 * delta_)
      throw SeparationViolated("TubularChart: dist(Gamma_t, boundary) = " +
                               std::to_string(min_bdry) + " violates the 5*delta separation (5*delta = " +
                               std::to_string(5.0 * delta_) + ") at t = " + std::to_string(t));
    if (min_reach <= 3.0 * delta_)
      throw SeparationViolated("TubularChart: curvature radius " + std::to_string(min_reach) +
                               " below 3*delta; projection not well-defined at t = " +
                               std::to_string(t));
  }
}

double TubularChart::signed_distance(Vec2 x, double t) const {
  if (curve_.is_circle()) return curve_.radius(t) - norm(x - curve_.center());
  double s;
  Vec2 p;
  project_and_s(x, t, s, p);
  return dot(x - p, curve_.normal(s, t));
}

void TubularChart::project_and_s(Vec2 x, double t, double& s, Vec2& p) const {
  if (curve_.is_circle()) {
    const Vec2 r = x - curve_.center();
    double a = std::atan2(r.y, r.x) / (2.0 * kPi);
    if (a < 0) a += 1.0;
    s = a;
    const double rad = curve_.radius(t);
    const double rn = norm(r);
    if (rn < 1e-14) throw ProjectionDiverged("project_and_s: center point is singular");
    p = curve_.center() + (rad / rn) * r;
    return;
  }
  // dense init then Newton on (x - X(s)) . X'(s) = 0
  const int ns = 512;
  double best_s = 0.0, best_d = 1e300;
  for (int i = 0; i < ns; ++i) {
    const double si = static_cast<double>(i) / ns;
    const double d = norm(x - curve_.spline_point(si));
    if (d < best_d) {
      best_d = d;
      best_s = si;
    }
  }
  double si = best_s;
  bool ok = false;
  for (int it = 0; it < 60; ++it) {
    const Vec2 dx = x - curve_.spline_point(si);
    const Vec2 d1 = curve_.spline_d1(si), d2 = curve_.spline_d2(si);
    const double g = dot(dx, d1);
    const double gp = -dot(d1, d1) + dot(dx, d2);
    if (gp == 0.0) break;
    const double step = g / gp;
    si -= step;
    if (std::abs(step) < 1e-14) {
      ok = true;
      break;
    }
  }
  if (!ok) throw ProjectionDiverged("project_and_s: Newton projection failed");
  si -= std::floor(si);
  s = si;
  p = curve_.spline_point(si);
}

double TubularChart::S(Vec2 x, double t) const {
  double s;
  Vec2 p;
  project_and_s(x, t, s, p);
  return s;
}

Vec2 TubularChart::grad_S(Vec2 x, double t) const {
  if (curve_.is_circle()) {
    const Vec2 r = x - curve_.center();
    const double r2 = dot(r, r);
    return {-r.y / (2.0 * kPi * r2), r.x / (2.0 * kPi * r2)};
  }
  // finite differences; S wraps, so difference via the projected points
  const double h = 1e-6;
  auto sdiff = [&](Vec2 a, Vec2 b) {
    double d = S(a, t) - S(b, t);
    if (d > 0.5) d -= 1.0;
    if (d < -0.5) d += 1.0;
    return d;
  };
  return {sdiff({x.x + h, x.y}, {x.x - h, x.y}) / (2 * h),
          sdiff({x.x, x.y + h}, {x.x, x.y - h}) / (2 * h)};
}

double TubularChart::laplace_S(Vec2 x, double t) const {
  if (curve_.is_circle()) return 0.0;
  const double h = 1e-4;
  auto f = [&](Vec2 y) { return S(y, t); };
  const double s0 = f(x);
  auto wrap = [&](double v) {
    double d = v - s0;
    if (d > 0.5) d -= 1.0;
    if (d < -0.5) d += 1.0;
    return d;
  };
  const double dxx = (wrap(f({x.x + h, x.y})) + wrap(f({x.x - h, x.y}))) / (h * h);
  const double dyy = (wrap(f({x.x, x.y + h})) + wrap(f({x.x, x.y - h}))) / (h * h);
  return dxx + dyy;
}

double TubularChart::dt_S(Vec2, double) const { return 0.0; }  // concentric circles / static splines

Vec2 TubularChart::normal_at(Vec2 x, double t) const {
  if (curve_.is_circle()) {
    const Vec2 r = x - curve_.center();
    const double rn = norm(r);
    return {-r.x / rn, -r.y / rn};
  }
  double s;
  Vec2 p;
  project_and_s(x, t, s, p);
  return curve_.normal(s, t);
}

double TubularChart::laplace_d(Vec2 x, double t) const {
  if (curve_.is_circle()) return -1.0 / norm(x - curve_.center());
  double s;
  Vec2 p;
  project_and_s(x, t, s, p);
  const double k = curve_.kappa(s, t);
  const double d = dot(x - p, curve_.normal(s, t));
  return k / (1.0 + d * k);
}

double TubularChart::dt_d(Vec2, double t) const {
  if (curve_.is_circle()) return curve_.radius_rate(t);
  return 0.0;
}

double TubularChart::dt_gamma(const HField& h, Vec2 x, double t) const {
  require_chart_local(x, t);
  const double s = S(x, t);
  return h.dh_dt(s, t) + dt_S(x, t) * h.dh_ds(s, t);
}

Vec2 TubularChart::grad_gamma(const HField& h, Vec2 x, double t) const {
  require_chart_local(x, t);
  const double s = S(x, t);
  return h.dh_ds(s, t) * grad_S(x, t);
}

double TubularChart::laplace_gamma(const HField& h, Vec2 x, double t) const {
  require_chart_local(x, t);
  const double s = S(x, t);
  const Vec2 gs = grad_S(x, t);
  return laplace_S(x, t) * h.dh_ds(s, t) + dot(gs, gs) * h.d2h_ds2(s, t);
}

void TubularChart::require_chart_local(Vec2 x, double t) const {
  const double d = signed_distance(x, t);
  if (std::abs(d) >= 3.0 * delta_)
    throw OutsideChart("surface operator requested at |d_Gamma| = " +
                       std::to_string(std::abs(d)) + " >= 3*delta");
}

StretchedPoint TubularChart::stretch(Vec2 x, double t, double eps, const HField& h) const {
  const double d = signed_distance(x, t);
  if (std::abs(d) >= 2.0 * delta_)
    throw OutsideChart("stretch: |d_Gamma| = " + std::to_string(std::abs(d)) +
                       " outside the 2*delta chart");
  double s;
  Vec2 p;
  project_and_s(x, t, s, p);
  return {d / eps - h(s, t), s, d, x};
}

Vec2 TubularChart::unstretch(double rho, double s, double t, double eps, const HField& h) const {
  const double d = eps * (rho + h(s, t));
  return curve_.point(s, t) + d * curve_.normal(s, t);
}

bool TubularChart::in_chart(Vec2 x, double t, double width_factor) const {
  return std::abs(signed_distance(x, t)) < width_factor * delta_;
}

}  // namespace mslab
