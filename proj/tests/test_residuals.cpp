#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mslab/error.hpp"
#include "mslab/numerics.hpp"
#include "mslab/profiles.hpp"
#include "mslab/residuals.hpp"

using namespace mslab;

namespace {

const ProfileSet& ps() {
  static ProfileSet p = ProfileSet::build_default();
  return p;
}
const SharpSolution& sharp_sol() {
  static SharpSolution s = evolve_sharp(1.0, 2.0, ps().moments.sigma, 0.05);
  return s;
}
const TubularChart& chart() {
  static TubularChart c = chart_from_sharp(sharp_sol(), default_delta(1.0, 2.0));
  return c;
}

}  // namespace

TEST_CASE("fit_order on synthetic data") {
  const std::vector<double> eps{0.08, 0.04, 0.02, 0.01};
  std::vector<double> quad, frac, con;
  for (double e : eps) {
    quad.push_back(3.7 * e * e);
    frac.push_back(2.0 * std::pow(e, 1.5) * (1.0 + 0.1 * std::sin(40.0 * e)));
    con.push_back(0.3);
  }
  CHECK(std::abs(fit_order(eps, quad).slope - 2.0) <= 1e-12);
  CHECK(std::abs(fit_order(eps, frac).slope - 1.5) <= 0.1);
  CHECK(std::abs(fit_order(eps, con).slope) <= 1e-12);
  CHECK_THROWS_AS(fit_order({0.1, 0.05}, {1.0, 0.5}), DegenerateFit);
  CHECK_THROWS_AS(fit_order({0.1, 0.05, 0.02}, {1.0, 0.0, 0.5}), DegenerateFit);
}

TEST_CASE("dictionary H1 norms against closed forms") {
  const double R = 2.0;
  const Dictionary d = Dictionary::standard(R);
  auto find = [&](const std::string& n) -> const DictionaryEntry& {
    for (const auto& e : d.entries)
      if (e.name == n) return e;
    throw std::runtime_error("missing entry");
  };
  CHECK(find("one").h1 == doctest::Approx(std::sqrt(kPi * R * R)).epsilon(1e-6));
  CHECK(find("x1").h1 ==
        doctest::Approx(std::sqrt(kPi * std::pow(R, 4) / 4 + kPi * R * R)).epsilon(1e-6));
  CHECK(find("x1sq").h1 ==
        doctest::Approx(std::sqrt(kPi * std::pow(R, 6) / 8 + kPi * std::pow(R, 4))).epsilon(1e-6));
}

TEST_CASE("weak norm: zero, oscillatory and single-entry examples") {
  EvalGrid g = EvalGrid::radial(2.0, 0.05, 400, 4);
  ResidualField r;
  r.kind = ResidualKind::rCH1;
  r.grid = g;
  r.values.assign(static_cast<size_t>(g.nr()) * g.nt(), 0.0);
  r.strata.assign(r.values.size(), Stratum::Bulk);
  const Dictionary dict = Dictionary::standard(2.0);
  CHECK(weak_norm(r, dict) == 0.0);

  // sign-alternating fine oscillation: weak norm far below the L2 norm
  for (int j = 0; j < g.nt(); ++j)
    for (int i = 0; i < g.nr(); ++i)
      r.values[static_cast<size_t>(j) * g.nr() + i] = std::sin(60.0 * kPi * g.rs[i] / 2.0);
  CHECK(weak_norm(r, dict) <= 0.02 * r.l2());

  // non-negative field against the {1} dictionary: equals |int int r| / ||1||
  Dictionary one;
  one.entries.push_back(Dictionary::standard(2.0).entries[0]);
  for (auto& v : r.values) v = std::abs(v) + 0.1;
  double integral = 0.0;
  for (int j = 0; j < g.nt(); ++j)
    for (int i = 0; i < g.nr(); ++i)
      integral += g.wt[j] * g.wr[i] * 2.0 * kPi * g.rs[i] *
                  r.values[static_cast<size_t>(j) * g.nr() + i];
  CHECK(weak_norm(r, one) ==
        doctest::Approx(std::abs(integral) / one.entries[0].h1).epsilon(1e-12));
}

TEST_CASE("FD stencils reach 4th order on a manufactured field") {
  auto exact_field = [](Vec2 x) { return std::sin(1.3 * x.x) * std::cos(0.7 * x.y); };
  auto exact_lap = [](Vec2 x) {
    return -(1.3 * 1.3 + 0.7 * 0.7) * std::sin(1.3 * x.x) * std::cos(0.7 * x.y);
  };
  const Vec2 x{0.52, -0.34};
  auto lap_with = [&](double h) {
    auto axis = [&](Vec2 e) {
      return (-exact_field(x + 2 * h * e) + 16 * exact_field(x + h * e) - 30 * exact_field(x) +
              16 * exact_field(x - h * e) - exact_field(x - 2 * h * e)) /
             (12 * h * h);
    };
    return axis({1, 0}) + axis({0, 1});
  };
  const double e1 = std::abs(lap_with(0.02) - exact_lap(x));
  const double e2 = std::abs(lap_with(0.01) - exact_lap(x));
  const double order = std::log(e1 / e2) / std::log(2.0);
  CHECK(order >= 3.5);
}

TEST_CASE("residuals of the glued field at eps = 0.05") {
  const double eps = 0.05;
  ApproxField f = glue(eps, ps(), sharp_sol(), chart());
  EvalGrid g = EvalGrid::radial(2.0, 0.05, 640, 5);
  const FdScheme fd = FdScheme::for_eps(eps);

  // r_div vanishes identically (v_A = 0 radially)
  const auto rdiv = eval_residual(f, ResidualKind::rDiv, g, fd);
  CHECK(rdiv.linf() == 0.0);

  // bulk r_CH2 equals the quartic Taylor tail -3 beta eps c1^2 + O(eps^2)
  const auto rch2 = eval_residual(f, ResidualKind::rCH2, g, fd);
  const double c1p = ps().moments.sigma / (2.0 * sharp_sol().radius(0.0));
  const double predicted = 3.0 * 1.0 * eps * c1p * c1p;
  CHECK(rch2.linf(Stratum::Bulk) == doctest::Approx(predicted).epsilon(0.15));

  // stratification is a partition: every sample lands in exactly one stratum
  int counts[4] = {0, 0, 0, 0};
  for (auto s : rch2.strata) counts[static_cast<int>(s)]++;
  CHECK(counts[0] + counts[1] + counts[2] + counts[3] ==
        static_cast<int>(rch2.values.size()));
  CHECK(counts[0] > 0);
  CHECK(counts[1] > 0);
  CHECK(counts[2] > 0);
  CHECK(counts[3] > 0);

  // interface stratum carries the O(eps)-level truncation terms
  CHECK(rch2.l2(Stratum::Interface) <= 10.0 * eps);
  CHECK(rch2.l2(Stratum::Interface) >= 0.01 * eps);

  // residual identity: Delta mu - dt c - v . grad c = -r_CH1 sample for sample
  const auto rch1 = eval_residual(f, ResidualKind::rCH1, g, fd);
  for (int i = 0; i < g.nr(); i += 97) {
    const Vec2 x{g.rs[i], 0.0};
    const double t = g.ts[2];
    auto cfun = [&](Vec2 y) { return f.c(y, t); };
    auto mufun = [&](Vec2 y) { return f.mu(y, t); };
    auto lap = [&](const std::function<double(Vec2)>& fn) {
      auto axis = [&](Vec2 e) {
        const double h = fd.hx;
        return (-fn(x + 2 * h * e) + 16 * fn(x + h * e) - 30 * fn(x) + 16 * fn(x - h * e) -
                fn(x - 2 * h * e)) /
               (12 * h * h);
      };
      return axis({1, 0}) + axis({0, 1});
    };
    const double dtc = (f.c(x, t + fd.ht) - f.c(x, t - fd.ht)) / (2 * fd.ht);
    const double assembled = lap(mufun) - dtc;  // v = 0
    (void)cfun;
    CHECK(assembled == doctest::Approx(-rch1.at(2, i)).epsilon(1e-10));
  }
}

TEST_CASE("stencil out of domain is rejected") {
  ApproxField f = glue(0.05, ps(), sharp_sol(), chart());
  EvalGrid g = EvalGrid::radial(2.0, 0.05, 64, 2, 1e-5);  // margin thinner than the stencil
  CHECK_THROWS_AS(eval_residual(f, ResidualKind::rCH2, g, FdScheme::for_eps(0.05)),
                  StencilOutOfDomain);
}

TEST_CASE("error norms: field against itself vanishes; energy integrand sign") {
  const double eps = 0.08;
  ApproxField f = glue(eps, ps(), sharp_sol(), chart());
  const RadialGrid rg{2.0, 401};
  const std::vector<double> ts{0.0, 0.025, 0.05};

  DiffuseHistory hist;
  for (double t : ts) {
    RadialState s;
    s.t = t;
    s.c.resize(rg.nr);
    s.mu.assign(rg.nr, 0.0);
    for (int i = 0; i < rg.nr; ++i) s.c[i] = f.c({rg.r(i), 0.0}, t);
    hist.snapshots.push_back(std::move(s));
    hist.ts.push_back(t);
    hist.R_eps.push_back(sharp_sol().radius(t));
    hist.energy.push_back(0.0);
    hist.mass.push_back(0.0);
  }
  const Dictionary dict = Dictionary::standard(2.0);
  const auto norms = error_norms(hist, rg, f, dict, ts);
  CHECK(norms.err_l2l2 == 0.0);
  CHECK(norms.err_l2_outside == 0.0);
  CHECK(norms.err_hm1_sup == 0.0);
  CHECK(norms.err_energy == 0.0);
  CHECK(norms.interface_sup <= 1e-12);

  // the energy-norm integrand is pointwise nonnegative wherever f''(c_A) >= 0,
  // i.e. outside Gamma(delta) by the spectral check
  const double t = 0.02;
  for (double r : {0.1, 0.5, 1.6, 1.9}) {
    const double d = chart().signed_distance({r, 0.0}, t);
    if (std::abs(d) >= chart().delta())
      CHECK(ps().well.d2f(f.c({r, 0.0}, t)) >= 0.0);
  }
}

TEST_CASE("error norms decrease monotonically over the eps sweep") {
  // desk-scale sweep at reduced cost: T = 0.02, coarse time sampling
  const double T = 0.02;
  const SharpSolution sh = evolve_sharp(1.0, 2.0, ps().moments.sigma, T);
  const TubularChart ch = chart_from_sharp(sh, default_delta(1.0, 2.0));
  const Dictionary dict = Dictionary::standard(2.0);
  const std::vector<double> ts{0.0, 0.01, 0.02};
  std::vector<double> m1, m4;
  for (double eps : {0.08, 0.04}) {
    ApproxField f = glue(eps, ps(), sh, ch);
    RadialGrid rg{2.0, static_cast<int>(std::ceil(16.0 / eps)) * 2 + 1};
    auto hist = run(f, rg, eps, T, 10 * eps * eps * eps, ts);
    const auto norms = error_norms(hist, rg, f, dict, ts);
    m1.push_back(norms.err_l2l2);
    m4.push_back(norms.err_energy);
  }
  CHECK(m1[1] < m1[0]);
  CHECK(m4[1] < m4[0]);
}
