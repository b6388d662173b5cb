#include <doctest.h>

#include <cmath>
#include <vector>

#include "minsurf/errors.hpp"
#include "minsurf/multigraph.hpp"

using namespace minsurf;
using namespace minsurf::multigraph;

namespace {

const Sector kCover{1.0, 64.0, -kPi, 3 * kPi};
constexpr double kR = 4096, kR1 = 4;

MultiGraph model(const std::string& name, double a, double b, double c, double pert = 0, const Sector& s = kCover,
                 int nr = 385) {
  ModelParams p;
  p.a = a;
  p.b = b;
  p.c = c;
  p.perturbation = pert;
  p.shift = 1;
  return build_model(name, p, s, nr, 256);
}

PolarField power_field(double beta) {
  const auto grid = PolarGrid::over({1, 64, 0, kTwoPi}, 121, 64);
  PolarField w{grid, {}};
  for (int i = 0; i < grid.nr; ++i)
    for (int j = 0; j < grid.nth; ++j) w.v.push_back(std::pow(grid.rho(i), beta));
  return w;
}

double sup(const PolarField& w) {
  double m = 0;
  for (double v : w.v) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("models") {
  ModelParams hp;
  hp.c = kTwoPi;
  const auto h = build_model("helicoid", hp, {1, 8, 0, 4 * kPi}, 33, 64);
  for (int i = 0; i < h.grid.nr; ++i)
    for (int j = 0; j < h.grid.nth; ++j) CHECK(h.at(i, j) == doctest::Approx(h.grid.theta(j)).epsilon(1e-14));
  const auto w = separation(h);
  for (double v : w.v) CHECK(v == doctest::Approx(kTwoPi).epsilon(1e-14));

  const StandardPiece sp{1, 2, 3, 1};
  CHECK(sp.value(std::exp(1.0), 0) == doctest::Approx(3.0).epsilon(1e-15));

  ModelParams sl;
  const auto slab = build_model("slab_arctan", sl, {std::exp(2.0), std::exp(8.0), -kTwoPi, 4 * kPi}, 65, 64);
  for (double v : slab.u) CHECK(std::abs(v) <= kPi / 2);
  const auto ws = separation(slab);
  const int j0 = ws.grid.angular_node(0.0);
  for (int i = 0; i < ws.grid.nr; ++i) {
    CHECK(ws.at(i, j0) == doctest::Approx(std::atan(kTwoPi / std::log(ws.grid.rho(i)))).epsilon(1e-13));
    if (i > 0) CHECK(ws.at(i, j0) < ws.at(i - 1, j0));
  }
  CHECK_THROWS_AS(build_model("slab_arctan", sl, {1, 8, 0, 4 * kPi}, 33, 64), BadSector);
  CHECK_THROWS_AS(build_model("costa", sl, kCover, 33, 64), UnknownPreset);
  CHECK_THROWS_AS((Sector{2, 1, 0, 1}.validate()), BadSector);
  CHECK_THROWS_AS((Sector{1, 2, 1, 1}.validate()), BadSector);
}

TEST_CASE("separation of a standard piece is exactly c") {
  const auto g = model("standard", 0.3, -1.7, 2.5, 0, {1, 16, 0, 4 * kPi}, 65);
  const auto w = separation(g);
  for (double v : w.v) CHECK(std::abs(v - 2.5) < 1e-13);
  CHECK(sign_of(w) == 1);
}

TEST_CASE("separation needs an aligned angular grid") {
  MultiGraph g;
  g.sector = {1, 2, 0, 8.0};
  g.grid = PolarGrid{0, std::log(2.0) / 8, 9, 0, 0.1, 81};
  g.u.assign(g.grid.size(), 0.0);
  CHECK_THROWS_AS(separation(g), GridMisaligned);
}

TEST_CASE("property: models never change sheet order and reflection flips it") {
  for (const char* name : {"helicoid", "standard", "slab_arctan"}) {
    CAPTURE(name);
    ModelParams p;
    p.a = 0.5;
    p.b = 0.8;
    p.c = 1.3;
    p.shift = 1;
    const Sector s{1, 32, -kTwoPi, kTwoPi};
    const auto g = build_model(name, p, s, 65, 64);
    const int sign = sign_of(separation(g));
    CHECK(sign != 0);
    const auto ref = MultiGraph::sample(s, 65, 64, [&](double rho, double th) {
      const int i = g.grid.radial_node(rho), j = g.grid.angular_node(-th);
      return g.at(i, j);
    });
    CHECK(sign_of(separation(ref)) == -sign);
  }
}

TEST_CASE("sublinear growth defect") {
  PolarField helicoid = power_field(0.0);
  for (double& v : helicoid.v) v = kTwoPi;
  CHECK(sublinear_defect(helicoid, 0.5, 2, 8) == doctest::Approx(kTwoPi - kTwoPi * 2));
  CHECK(sublinear_defect(power_field(0.3), 0.5, 2, 8) < 0);
  CHECK(sublinear_defect(power_field(0.3), 0.5, 2, 8) ==
        doctest::Approx(std::pow(8, 0.3) - std::pow(2, 0.3) * 2).epsilon(1e-10));
  CHECK(sublinear_defect(power_field(1.0), 0.5, 2, 8) > 0);
  PolarField mixed = power_field(1.0);
  for (int j = 0; j < mixed.grid.nth; ++j) mixed.v[mixed.grid.index(40, j)] = -1;
  CHECK_THROWS_AS(sublinear_defect(mixed, 0.5, 2, 8), SignChange);
}

TEST_CASE("log gradient of the separation") {
  CHECK(log_separation_gradient(power_field(0.0), 8, 1.0, 0.5).value < 1e-12);
  for (double beta : {0.3, 0.7, 1.5}) {
    const auto lg = log_separation_gradient(power_field(beta), 8, 1.0, 0.5);
    CHECK(lg.value == doctest::Approx(beta).epsilon(1e-10));
    CHECK(lg.within == (beta <= 0.5));
  }
  ModelParams sl;
  const auto slab = build_model("slab_arctan", sl, {std::exp(2.0), std::exp(8.0), -kTwoPi, 4 * kPi}, 241, 256);
  const double L = 4;
  const double wL = -kTwoPi / (L * L + 4 * kPi * kPi);
  const double wT = L / (L * L + 4 * kPi * kPi) - 1 / L;
  const double w = std::atan(kTwoPi / L);
  const auto lg = log_separation_gradient(separation(slab), std::exp(L), 0.0, 1.0);
  CHECK(lg.value == doctest::Approx(std::hypot(wL, wT) / w).epsilon(1e-3));
}

TEST_CASE("Cauchy decomposition of harmonic models") {
  SUBCASE("helicoid sheet") {
    const auto d = cauchy_decompose(model("helicoid", 0, 0, 1.7), kR1, kR);
    CHECK(std::abs(d.b) < 1e-6);
    CHECK(d.c == doctest::Approx(1.7).epsilon(1e-6));
    CHECK(d.residual_sup < 1e-6);
    CHECK(d.cross_sector_spread < 1e-6);
  }
  SUBCASE("catenoid end") {
    const auto d = cauchy_decompose(model("catenoid_log", 0, 0.9, 0), kR1, kR);
    CHECK(d.b == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(std::abs(d.c) < 1e-6);
  }
  SUBCASE("constant") {
    const auto d = cauchy_decompose(model("standard", 2.5, 0, 0), kR1, kR);
    CHECK(std::abs(d.b) < 1e-12);
    CHECK(std::abs(d.c) < 1e-12);
    CHECK(d.residual_sup < 1e-12);
  }
  SUBCASE("property: equivariance under the plane, catenoid and helicoid terms") {
    const auto base = cauchy_decompose(model("standard", 0, 0.4, 0.6, 1e-3), kR1, kR);
    const auto plus_a = cauchy_decompose(model("standard", 3, 0.4, 0.6, 1e-3), kR1, kR);
    const auto plus_b = cauchy_decompose(model("standard", 0, 1.4, 0.6, 1e-3), kR1, kR);
    const auto plus_c = cauchy_decompose(model("standard", 0, 0.4, 2.6, 1e-3), kR1, kR);
    CHECK(std::abs(plus_a.b - base.b) < 1e-8);
    CHECK(std::abs(plus_a.c - base.c) < 1e-8);
    CHECK(std::abs(plus_b.b - base.b - 1) < 1e-8);
    CHECK(std::abs(plus_b.c - base.c) < 1e-8);
    CHECK(std::abs(plus_c.b - base.b) < 1e-8);
    CHECK(std::abs(plus_c.c - base.c - 2) < 1e-8);
  }
  SUBCASE("residual decays away from the extraction circle") {
    const auto d = cauchy_decompose(model("standard", 0, 0.4, 0.6, 1e-2), kR1, kR);
    const auto& g = d.residual.grid;
    std::vector<double> x, y;
    for (int i = 0; i < g.nr; i += 8) {
      double m = 0;
      for (int j = 0; j < g.nth; ++j) m = std::max(m, d.residual.at(i, j));
      x.push_back(std::log(g.rho(i)));
      y.push_back(std::log(m));
    }
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      mx += x[k] / x.size();
      my += y[k] / y.size();
    }
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      sxy += (x[k] - mx) * (y[k] - my);
      sxx += (x[k] - mx) * (x[k] - mx);
    }
    CHECK(sxy / sxx <= -0.9);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(cauchy_decompose(model("standard", 0, 1, 1, 0, {1, 32, -kPi, 3 * kPi}, 193), kR1, kR),
                    SectorTooSmall);
    CHECK_THROWS_AS(cauchy_decompose(model("standard", 0, 1, 1), 32, kR), SectorTooSmall);
    auto g = model("standard", 0, 1, 1);
    g.u[g.grid.index(200, 300)] = std::nan("");
    CHECK_THROWS_AS(cauchy_decompose(g, kR1, kR), NonFiniteSamples);
  }
}

TEST_CASE("standard piece fits") {
  const auto exact = fit_standard_piece(model("standard", 1, 2, 3), kR1, 2, kR);
  CHECK(exact.misfit <= 1e-6);
  CHECK(exact.piece.b == doctest::Approx(2).epsilon(1e-6));
  CHECK(exact.piece.c == doctest::Approx(3).epsilon(1e-6));
  CHECK(exact.piece.a - exact.piece.b * std::log(exact.piece.r) == doctest::Approx(1).epsilon(1e-6));

  const auto pert = fit_standard_piece(model("standard", 1, 2, 3, 1e-3), kR1, 2, kR);
  CHECK(std::abs(pert.piece.b - 2) <= 2e-3);
  CHECK(std::abs(pert.piece.c - 3) <= 2e-3);
  CHECK(pert.misfit <= 5e-3);

  // The arctan sheets flatten out: c and the misfit shrink on larger sectors.
  std::vector<double> c, misfit;
  for (double R : {4096.0, 65536.0, 1048576.0}) {
    const double root = std::sqrt(R);
    const int nr = static_cast<int>(std::lround(std::log(root) / std::log(64.0) * 384)) + 1;
    const auto f = fit_standard_piece(model("slab_arctan", 0, 0, 0, 0, {1, root, -kPi, 3 * kPi}, nr), root / 16, 2, R);
    c.push_back(std::abs(f.piece.c));
    misfit.push_back(f.misfit);
  }
  CHECK(c[1] < c[0]);
  CHECK(c[2] < c[1]);
  CHECK(misfit[1] < misfit[0]);
  CHECK(misfit[2] < misfit[1]);
}

TEST_CASE("wantit diagnostic") {
  const auto d = wantit_diagnostic(model("standard", 0, 0.01, 0.02), 4, 8);
  CHECK(d.separation_sign == 1);
  CHECK(d.epsilon > 0);
  const auto flat = wantit_diagnostic(model("standard", 0, 0.0, 0.02), 4, 8);
  CHECK(flat.epsilon < d.epsilon);
}
