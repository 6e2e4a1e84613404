#include "mslab/sharp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mslab/error.hpp"

namespace mslab {

namespace {
void check_radii(double R, double R_out) {
  if (!(R_out > 0.0) || R < 1e-12 || R_out - R < 1e-12)
    throw DegenerateRadius("degenerate radii R = " + std::to_string(R) +
                           ", R_out = " + std::to_string(R_out));
}
}  // namespace

double radial_mu(double R, double R_out, double sigma, double r) {
  check_radii(R, R_out);
  r = std::clamp(r, 0.0, R_out);
  if (r <= R) return sigma / R;
  return (sigma / R) * std::log(r / R_out) / std::log(R / R_out);
}

double radial_mu_dr(double R, double R_out, double sigma, double r) {
  check_radii(R, R_out);
  if (r <= R) return 0.0;
  return (sigma / R) / (r * std::log(R / R_out));
}

double interface_ode_rhs(double R, double R_out, double sigma) {
  check_radii(R, R_out);
  return sigma / (2.0 * R * R * std::log(R / R_out));
}

double radial_stokes_pressure(double R, double sigma) { return 2.0 * sigma / R; }

namespace {
double time_integral_F(double r, double R_out) {
  return (r * r * r / 3.0) * std::log(R_out / r) + r * r * r / 9.0;
}
}  // namespace

double SharpSolution::time_of_radius(double R) const {
  check_radii(R, R_out);
  if (sigma == 0.0) return 0.0;
  return (2.0 / sigma) * (time_integral_F(R0, R_out) - time_integral_F(R, R_out));
}

double SharpSolution::radius(double t) const {
  if (sigma == 0.0) return R0;
  // Newton inversion of the monotone map t(R); dt/dR = 1/rhs(R)
  double R = R0;
  if (!ts.empty()) {
    // warm start from the dense output when available
    R = radius_dense(std::clamp(t, ts.front(), ts.back()));
  }
  for (int it = 0; it < 60; ++it) {
    const double g = time_of_radius(R) - t;
    const double dgdR = 1.0 / interface_ode_rhs(R, R_out, sigma);
    const double step = g / dgdR;
    R -= step;
    R = std::clamp(R, 1e-10, R_out - 1e-10);
    if (std::abs(step) < 1e-14 * std::max(1.0, R)) break;
  }
  return R;
}

double SharpSolution::radius_dense(double t) const {
  if (ts.empty()) throw NumericalError("SharpSolution: empty dense output");
  if (t <= ts.front()) return Rs.front();
  if (t >= ts.back()) return Rs.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const size_t k = static_cast<size_t>(it - ts.begin()) - 1;
  const double h = ts[k + 1] - ts[k];
  const double u = (t - ts[k]) / h;
  const double y0 = Rs[k], y1 = Rs[k + 1], f0 = fs[k] * h, f1 = fs[k + 1] * h;
  // cubic Hermite
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * f0 + (-2 * u3 + 3 * u2) * y1 +
         (u3 - u2) * f1;
}

SharpSolution evolve_sharp(double R0, double R_out, double sigma, double T, double rtol) {
  check_radii(R0, R_out);
  SharpSolution sol;
  sol.R0 = R0;
  sol.R_out = R_out;
  sol.sigma = sigma;
  sol.T = T;

  const double R_floor = 0.05 * R_out;
  auto f = [&](double, double R) { return sigma == 0.0 ? 0.0 : interface_ode_rhs(R, R_out, sigma); };

  // Dormand-Prince 5(4)
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                      b6 = 11.0 / 84;
  static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                      e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                      e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  double t = 0.0, y = R0;
  double k1 = f(t, y);
  sol.ts.push_back(t);
  sol.Rs.push_back(y);
  sol.fs.push_back(k1);

  // cap the step so the cubic Hermite dense output keeps pace with rtol
  const double h_max = std::max(T / 100.0, 1e-6);
  double h = std::min({T, h_max, k1 != 0.0 ? 0.01 * std::abs(y / k1) : T});
  if (h <= 0.0) return sol;
  int guard = 0;
  const double t_end_tol = 1e-13 * std::max(1.0, T);
  while (T - t > t_end_tol) {
    if (++guard > 2000000) throw NumericalError("evolve_sharp: step guard tripped");
    h = std::min({h, T - t, h_max});
    double y5, k7, err;
    try {
      const double k2 = f(t + c2 * h, y + h * a21 * k1);
      const double k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
      const double k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const double k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const double k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      if (y5 <= R_floor)
        throw InterfaceCollapse("evolve_sharp: R hit the 0.05 R_out floor at t = " +
                                std::to_string(t + h));
      k7 = f(t + h, y5);
      err = std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
    } catch (const DegenerateRadius&) {
      // a trial stage left the admissible radius range: the interface is
      // collapsing faster than the current step resolves
      if (h <= 1e-12) throw InterfaceCollapse("evolve_sharp: radius left the admissible range");
      h *= 0.2;
      continue;
    }
    const double tol = rtol * std::max(std::abs(y), std::abs(y5)) + 1e-14;
    if (err <= tol) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      sol.ts.push_back(t);
      sol.Rs.push_back(y);
      sol.fs.push_back(k1);
    }
    const double fac = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
    if (h < 1e-15) throw NumericalError("evolve_sharp: step size underflow");
  }
  return sol;
}

}  // namespace mslab
