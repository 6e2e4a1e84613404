#include "mslab/residuals.hpp"

#include <algorithm>
#include <cmath>

#include "mslab/error.hpp"
#include "mslab/linalg.hpp"
#include "mslab/numerics.hpp"

namespace mslab {

std::string to_string(ResidualKind k) {
  switch (k) {
    case ResidualKind::rS: return "rS";
    case ResidualKind::rDiv: return "rdiv";
    case ResidualKind::rCH1: return "rCH1";
    case ResidualKind::rCH2: return "rCH2";
    case ResidualKind::rCH2Taylor: return "rCH2_taylor";
  }
  return "?";
}

std::string to_string(Stratum s) {
  switch (s) {
    case Stratum::Interface: return "interface";
    case Stratum::Matching: return "matching";
    case Stratum::Bulk: return "bulk";
    case Stratum::Collar: return "collar";
  }
  return "?";
}

EvalGrid EvalGrid::radial(double R_out, double T, int nr, int nt, double r_margin) {
  EvalGrid g;
  const double r0 = r_margin * R_out;
  const double r1 = R_out - r_margin * R_out;
  g.rs.resize(nr);
  g.wr.assign(nr, 0.0);
  const double hr = (r1 - r0) / (nr - 1);
  for (int i = 0; i < nr; ++i) {
    g.rs[i] = r0 + i * hr;
    g.wr[i] = (i == 0 || i == nr - 1) ? 0.5 * hr : hr;
  }
  g.ts.resize(nt);
  g.wt.assign(nt, 0.0);
  if (nt == 1) {
    g.ts[0] = T;
    g.wt[0] = 1.0;
  } else {
    const double ht = T / (nt - 1);
    for (int j = 0; j < nt; ++j) {
      g.ts[j] = j * ht;
      g.wt[j] = (j == 0 || j == nt - 1) ? 0.5 * ht : ht;
    }
  }
  return g;
}

FdScheme FdScheme::for_eps(double eps) {
  FdScheme fd;
  fd.hx = eps / 40.0;
  fd.ht = std::max(3e-5, 1e-3 * eps * eps);
  return fd;
}

double ResidualField::linf(std::optional<Stratum> s) const {
  double m = 0.0;
  for (size_t k = 0; k < values.size(); ++k)
    if (!s || strata[k] == *s) m = std::max(m, std::abs(values[k]));
  return m;
}

double ResidualField::l2(std::optional<Stratum> s) const {
  double acc = 0.0;
  const int nr = grid.nr();
  for (int j = 0; j < grid.nt(); ++j)
    for (int i = 0; i < nr; ++i) {
      const size_t k = static_cast<size_t>(j) * nr + i;
      if (s && strata[k] != *s) continue;
      acc += grid.wt[j] * grid.wr[i] * 2.0 * kPi * grid.rs[i] * values[k] * values[k];
    }
  return std::sqrt(acc);
}

namespace {

struct FieldOps {
  const ApproxField* f;
  double t;
  FdScheme fd;

  double lap(const std::function<double(Vec2)>& g, Vec2 x) const {
    const double h = fd.hx;
    auto axis = [&](Vec2 e) {
      return (-g(x + 2 * h * e) + 16 * g(x + h * e) - 30 * g(x) + 16 * g(x - h * e) -
              g(x - 2 * h * e)) /
             (12 * h * h);
    };
    return axis({1, 0}) + axis({0, 1});
  }
  Vec2 grad(const std::function<double(Vec2)>& g, Vec2 x) const {
    const double h = fd.hx;
    auto axis = [&](Vec2 e) {
      return (-g(x + 2 * h * e) + 8 * g(x + h * e) - 8 * g(x - h * e) + g(x - 2 * h * e)) /
             (12 * h);
    };
    return {axis({1, 0}), axis({0, 1})};
  }
};

}  // namespace

ResidualField eval_residual(const ApproxField& field, ResidualKind kind, const EvalGrid& grid,
                            const FdScheme& fd) {
  const double R_out = field.sharp().R_out;
  if (grid.rs.back() + 2.0 * fd.hx >= R_out || grid.rs.front() - 2.0 * fd.hx <= -R_out)
    throw StencilOutOfDomain("eval_residual: FD stencil leaves the domain");

  ResidualField out;
  out.kind = kind;
  out.grid = grid;
  const int nr = grid.nr(), nt = grid.nt();
  out.values.resize(static_cast<size_t>(nr) * nt);
  out.strata.resize(out.values.size());

  const double delta = field.chart().delta();
  const double eps = field.eps();
  const DoubleWell& well = field.profiles().well;

  for (int j = 0; j < nt; ++j) {
    const double t = grid.ts[j];
    FieldOps ops{&field, t, fd};
    auto cfun = [&](Vec2 y) { return field.c(y, t); };
    auto mufun = [&](Vec2 y) { return field.mu(y, t); };
    auto pfun = [&](Vec2 y) { return field.p(y, t); };
    auto v1 = [&](Vec2 y) { return field.v(y, t).x; };
    auto v2 = [&](Vec2 y) { return field.v(y, t).y; };
    for (int i = 0; i < nr; ++i) {
      const Vec2 x{grid.rs[i], 0.0};
      const double d = field.chart().signed_distance(x, t);
      const double db = field.chart().domain().sdist(x);
      Stratum st = Stratum::Bulk;
      if (std::abs(d) < delta)
        st = Stratum::Interface;
      else if (std::abs(d) < 2.0 * delta)
        st = Stratum::Matching;
      else if (db > -delta)
        st = Stratum::Collar;

      double v = 0.0;
      switch (kind) {
        case ResidualKind::rCH1: {
          const double dtc = (field.c(x, t + fd.ht) - field.c(x, t - fd.ht)) / (2.0 * fd.ht);
          const Vec2 gc = ops.grad(cfun, x);
          v = dtc + dot(field.v(x, t), gc) - ops.lap(mufun, x);
          break;
        }
        case ResidualKind::rCH2: {
          v = field.mu(x, t) + eps * ops.lap(cfun, x) - well.df(field.c(x, t)) / eps;
          break;
        }
        case ResidualKind::rCH2Taylor: {
          // f' replaced by its order-consistent Taylor truncation about the
          // outer state c0 = sign(d): f'(c0) + f''(c0)(c - c0)
          const double c0 = d >= 0.0 ? 1.0 : -1.0;
          const double lin = well.d2f(c0) * (field.c(x, t) - c0);
          v = field.mu(x, t) + eps * ops.lap(cfun, x) - lin / eps;
          break;
        }
        case ResidualKind::rS: {
          const Vec2 gp = ops.grad(pfun, x);
          const Vec2 gc = ops.grad(cfun, x);
          const double mu = field.mu(x, t);
          // -Delta v_A vanishes identically (v_A = 0)
          v = norm(gp - mu * gc);
          break;
        }
        case ResidualKind::rDiv: {
          v = ops.grad(v1, x).x + ops.grad(v2, x).y;
          break;
        }
      }
      out.values[static_cast<size_t>(j) * nr + i] = v;
      out.strata[static_cast<size_t>(j) * nr + i] = st;
    }
  }
  return out;
}

Dictionary Dictionary::standard(double R_out) {
  Dictionary d;
  auto add = [&](const std::string& name, std::function<double(Vec2)> phi,
                 std::function<Vec2(Vec2)> grad, std::function<double(double)> am) {
    d.entries.push_back({name, std::move(phi), std::move(grad), std::move(am), 1.0});
  };
  add("one", [](Vec2) { return 1.0; }, [](Vec2) { return Vec2{0, 0}; },
      [](double) { return 1.0; });
  add("x1", [](Vec2 x) { return x.x; }, [](Vec2) { return Vec2{1, 0}; },
      [](double) { return 0.0; });
  add("x2", [](Vec2 x) { return x.y; }, [](Vec2) { return Vec2{0, 1}; },
      [](double) { return 0.0; });
  add("x1sq", [](Vec2 x) { return x.x * x.x; }, [](Vec2 x) { return Vec2{2 * x.x, 0}; },
      [](double r) { return 0.5 * r * r; });
  add("x1x2", [](Vec2 x) { return x.x * x.y; }, [](Vec2 x) { return Vec2{x.y, x.x}; },
      [](double) { return 0.0; });
  add("x2sq", [](Vec2 x) { return x.y * x.y; }, [](Vec2 x) { return Vec2{0, 2 * x.y}; },
      [](double r) { return 0.5 * r * r; });
  for (int k = 1; k <= 3; ++k) {
    const double r0 = 0.25 * k * R_out;
    const double w = 0.15 * R_out;
    auto g = [r0, w](double r) {
      const double u = (r - r0) / w;
      return std::exp(-u * u);
    };
    add("gauss" + std::to_string(k),
        [g](Vec2 x) { return g(norm(x)); },
        [g, r0, w](Vec2 x) {
          const double r = norm(x);
          if (r < 1e-14) return Vec2{0, 0};
          const double gp = g(r) * (-2.0 * (r - r0) / (w * w));
          return (gp / r) * x;
        },
        g);
  }
  // H1 norms by polar quadrature
  const int nrq = 2001, naq = 256;
  const double hr = R_out / (nrq - 1);
  for (auto& e : d.entries) {
    double acc = 0.0;
    for (int i = 0; i < nrq; ++i) {
      const double r = i * hr;
      double ring = 0.0;
      for (int a = 0; a < naq; ++a) {
        const double th = 2.0 * kPi * a / naq;
        const Vec2 x{r * std::cos(th), r * std::sin(th)};
        const Vec2 gr = e.grad(x);
        ring += e.phi(x) * e.phi(x) + dot(gr, gr);
      }
      ring *= 2.0 * kPi / naq;
      acc += (i == 0 || i == nrq - 1 ? 0.5 : 1.0) * ring * r * hr;
    }
    e.h1 = std::sqrt(acc);
  }
  return d;
}

double weak_norm(const ResidualField& r, const Dictionary& dict) {
  const int nr = r.grid.nr(), nt = r.grid.nt();
  double best = 0.0;
  for (const auto& e : dict.entries) {
    double acc = 0.0;
    for (int j = 0; j < nt; ++j) {
      double inner = 0.0;
      for (int i = 0; i < nr; ++i)
        inner += r.grid.wr[i] * 2.0 * kPi * r.grid.rs[i] * r.at(j, i) *
                 e.angular_mean(r.grid.rs[i]);
      acc += r.grid.wt[j] * std::abs(inner);
    }
    best = std::max(best, acc / e.h1);
  }
  return best;
}

FitResult fit_order(const std::vector<double>& eps_list, const std::vector<double>& norms) {
  if (eps_list.size() < 3 || eps_list.size() != norms.size())
    throw DegenerateFit("fit_order: need at least 3 (eps, norm) pairs");
  std::vector<double> lx, ly;
  for (size_t i = 0; i < eps_list.size(); ++i) {
    if (!(norms[i] > 0.0)) throw DegenerateFit("fit_order: non-positive norm");
    lx.push_back(std::log(eps_list[i]));
    ly.push_back(std::log(norms[i]));
  }
  const LineFit f = fit_line(lx, ly);
  return {f.slope, f.rms};
}

ErrorNorms error_norms(const DiffuseHistory& hist, const RadialGrid& rgrid,
                       const ApproxField& field, const Dictionary& dict,
                       const std::vector<double>& ts) {
  if (hist.snapshots.size() != ts.size())
    throw GridMismatch("error_norms: history snapshots do not match the requested times");
  const double eps = field.eps();
  const double delta = field.chart().delta();
  const DoubleWell& well = field.profiles().well;
  const int n = rgrid.nr;
  const double h = rgrid.h();

  // time quadrature weights (trapezoid over ts)
  std::vector<double> wt(ts.size(), 0.0);
  if (ts.size() == 1) {
    wt[0] = 1.0;
  } else {
    for (size_t j = 0; j + 1 < ts.size(); ++j) {
      const double dt = ts[j + 1] - ts[j];
      wt[j] += 0.5 * dt;
      wt[j + 1] += 0.5 * dt;
    }
  }

  ErrorNorms out;
  double sq_all = 0, sq_out = 0, grad_out = 0, dn_in = 0, energy = 0;
  for (size_t j = 0; j < ts.size(); ++j) {
    const double t = hist.snapshots[j].t;
    const std::vector<double>& ce = hist.snapshots[j].c;
    std::vector<double> R(n), dR(n, 0.0), cA(n);
    for (int i = 0; i < n; ++i) {
      cA[i] = field.c({rgrid.r(i), 0.0}, t);
      R[i] = ce[i] - cA[i];
    }
    for (int i = 1; i + 1 < n; ++i) dR[i] = (R[i + 1] - R[i - 1]) / (2 * h);
    dR[0] = 0.0;
    dR[n - 1] = (R[n - 1] - R[n - 2]) / h;

    double hm1_t = 0.0;
    for (const auto& e : dict.entries) {
      double inner = 0.0;
      for (int i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1 ? 0.5 : 1.0) * h;
        inner += w * 2.0 * kPi * rgrid.r(i) * R[i] * e.angular_mean(rgrid.r(i));
      }
      hm1_t = std::max(hm1_t, std::abs(inner) / e.h1);
    }
    out.err_hm1_sup = std::max(out.err_hm1_sup, hm1_t);

    for (int i = 0; i < n; ++i) {
      const double w = (i == 0 || i == n - 1 ? 0.5 : 1.0) * h * 2.0 * kPi * rgrid.r(i);
      const double d = field.chart().signed_distance({rgrid.r(i), 0.0}, t);
      const double q = wt[j] * w;
      sq_all += q * R[i] * R[i];
      energy += q * (eps * dR[i] * dR[i] + well.d2f(cA[i]) * R[i] * R[i] / eps);
      if (std::abs(d) < delta) {
        dn_in += q * dR[i] * dR[i];  // |dn R| = |dr R| radially
      } else {
        sq_out += q * R[i] * R[i];
        grad_out += q * dR[i] * dR[i];
      }
    }
  }
  out.err_l2l2 = std::sqrt(sq_all);
  out.err_grad_gamma = 0.0;  // both fields are radial
  out.err_grad_outside = eps * std::sqrt(grad_out);
  out.err_l2_outside = std::sqrt(sq_out);
  out.err_dn_interface = std::pow(eps, 1.5) * std::sqrt(dn_in);
  out.err_energy = energy;

  for (size_t k = 0; k < hist.ts.size(); ++k)
    out.interface_sup = std::max(
        out.interface_sup, std::abs(hist.R_eps[k] - field.sharp().radius(hist.ts[k])));
  return out;
}

}  // namespace mslab
