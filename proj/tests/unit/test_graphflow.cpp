#include <doctest.h>

#include <cmath>
#include <vector>

#include "minsurf/errors.hpp"
#include "minsurf/graphflow.hpp"

using namespace minsurf;
using namespace minsurf::graphflow;

namespace {

double catenoid_graph(double x, double y) { return std::acosh(std::hypot(x, y)); }

// max over interior nodes of |residual - oracle|
double residual_error(const RectGrid& g, const std::function<double(double, double)>& u,
                      const std::function<double(double, double)>& oracle) {
  const auto f = GraphFunction::sample(g, u);
  const auto r = mse_residual(f);
  double worst = 0;
  for (int i = 1; i < g.nx - 1; ++i)
    for (int j = 1; j < g.ny - 1; ++j) worst = std::max(worst, std::abs(r[g.index(i, j)] - oracle(g.x(i), g.y(j))));
  return worst;
}

}  // namespace

TEST_CASE("minimal surface residual") {
  const auto g = RectGrid::span(-1, 1, 21, -1, 1, 17);
  const auto r = mse_residual(GraphFunction::sample(g, [](double x, double y) { return 1 + 2 * x - y; }));
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      if (g.is_boundary(i, j))
        CHECK(std::isnan(r[g.index(i, j)]));
      else
        CHECK(std::abs(r[g.index(i, j)]) < 1e-13);
    }

  auto parabola = [](double x, double) { return x * x; };
  auto oracle = [](double x, double) { return 2 / std::pow(1 + 4 * x * x, 1.5); };
  const double e1 = residual_error(RectGrid::span(-1, 1, 33, -1, 1, 33), parabola, oracle);
  const double e2 = residual_error(RectGrid::span(-1, 1, 65, -1, 1, 65), parabola, oracle);
  // Centered differences are exact on quadratics.
  CHECK(e1 < 1e-12);
  CHECK(e2 < 1e-12);

  auto zero = [](double, double) { return 0.0; };
  const double c1 = residual_error(RectGrid::span(1.2, 2.2, 33, -0.5, 0.5, 33), catenoid_graph, zero);
  const double c2 = residual_error(RectGrid::span(1.2, 2.2, 65, -0.5, 0.5, 65), catenoid_graph, zero);
  CHECK(c1 / c2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("GraphFunction invariants") {
  CHECK_THROWS_AS(GraphFunction(RectGrid::span(0, 1, 4, 0, 1, 9), std::vector<double>(36, 0.0)), InvalidInput);
  std::vector<double> u(81, 0.0);
  u[40] = std::nan("");
  CHECK_THROWS_AS(GraphFunction(RectGrid::span(0, 1, 9, 0, 1, 9), u), InvalidInput);
}

TEST_CASE("Dirichlet solver") {
  SUBCASE("affine data give the affine solution") {
    const auto g = RectGrid::span(0, 1, 17, 0, 2, 25);
    auto aff = [](double x, double y) { return 0.5 - 3 * x + 0.7 * y; };
    const auto res = solve_dirichlet(g, aff);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) CHECK(res.u.at(i, j) == doctest::Approx(aff(g.x(i), g.y(j))).epsilon(1e-10));
  }
  SUBCASE("catenoid boundary trace recovers the catenoid") {
    const auto g = RectGrid::span(1.2, 2.2, 129, -0.5, 0.5, 129);
    const auto res = solve_dirichlet(g, catenoid_graph);
    double err = 0;
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) err = std::max(err, std::abs(res.u.at(i, j) - catenoid_graph(g.x(i), g.y(j))));
    CHECK(err < 1e-4);
    CHECK(max_abs(mse_residual(res.u)) <= 1e-10);
    // Backtracking only accepts residual decreases.
    for (std::size_t k = 1; k < res.residual_history.size(); ++k)
      CHECK(res.residual_history[k] < res.residual_history[k - 1]);
  }
  SUBCASE("property: ordered boundary data give ordered solutions") {
    const auto g = RectGrid::span(-1, 1, 33, -1, 1, 33);
    for (double shift : {0.0, 0.05, 0.5}) {
      auto b1 = [](double x, double y) { return std::sin(2 * x) * std::cos(y); };
      auto b2 = [shift](double x, double y) { return std::sin(2 * x) * std::cos(y) + shift + 0.3 * (x + 1) * (x + 1); };
      const auto u1 = solve_dirichlet(g, b1).u;
      const auto u2 = solve_dirichlet(g, b2).u;
      for (std::size_t k = 0; k < g.size(); ++k) CHECK(u1.u[k] <= u2.u[k] + 1e-10);
    }
  }
  SUBCASE("iteration cap") {
    const auto g = RectGrid::span(-1, 1, 33, -1, 1, 33);
    SolveOptions o;
    o.max_iter = 1;
    CHECK_THROWS_AS(solve_dirichlet(g, [](double x, double y) { return 3 * std::sin(3 * x) * y * y; }, o), NoConvergence);
  }
}

TEST_CASE("harmonic extension reproduces harmonic polynomials") {
  const auto g = RectGrid::span(-1, 1, 21, -1, 1, 21);
  auto h = [](double x, double y) { return x * x - y * y + 2 * x * y - x; };
  const auto e = harmonic_extension(GraphFunction::sample(g, h));
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) CHECK(e.at(i, j) == doctest::Approx(h(g.x(i), g.y(j))).epsilon(1e-10));
}

TEST_CASE("Heinz quantity") {
  const auto g = RectGrid::span(-1, 1, 41, -1, 1, 41);
  const auto flat = GraphFunction::sample(g, [](double x, double y) { return 0.2 * x + y; });
  CHECK(heinz_report(flat, 0, 0, 0.8, 0.3).value < 1e-20);

  std::vector<double> values;
  for (double s : {1.0, 2.0, 4.0}) {
    const auto gs = RectGrid::span(1.4 * s, 2.6 * s, 97, -0.6 * s, 0.6 * s, 97);
    const auto u = GraphFunction::sample(gs, [s](double x, double y) { return s * std::acosh(std::hypot(x, y) / s); });
    const auto rep = heinz_report(u, 2 * s, 0, 0.5 * s, 0.2 * s);
    CHECK(rep.sup_A2 > 0);
    values.push_back(rep.value);
  }
  CHECK(values[1] == doctest::Approx(values[0]).epsilon(1e-10));
  CHECK(values[2] == doctest::Approx(values[0]).epsilon(1e-10));

  const auto cap = GraphFunction::sample(g, [](double x, double y) { return std::sqrt(4 - x * x - y * y); });
  CHECK_THROWS_AS(heinz_report(cap, 0, 0, 0.8, 0.3), NotMinimal);
  CHECK_THROWS_AS(heinz_report(flat, 0.5, 0, 0.8, 0.3), InsufficientDomain);
}

TEST_CASE("mean curvature flow of graphs") {
  SUBCASE("constants are fixed") {
    const auto g = RectGrid::span(0, 1, 11, 0, 1, 11);
    const auto tr = mcf_flow(GraphFunction::sample(g, [](double, double) { return 2.5; }), 0.05, 0.002);
    CHECK(tr.snapshots.size() > 2);
    for (const auto& s : tr.snapshots)
      for (double v : s.u) CHECK(v == 2.5);
  }
  SUBCASE("times strictly increase and end at T") {
    const auto g = RectGrid::span(-1, 1, 21, -1, 1, 21);
    FlowOptions o;
    o.snapshot_every = 3;
    const auto tr = mcf_flow(GraphFunction::sample(g, [](double x, double y) { return x * y; }), 0.03, 0.0019, o);
    for (std::size_t k = 1; k < tr.snapshots.size(); ++k) CHECK(tr.snapshots[k].t > tr.snapshots[k - 1].t);
    CHECK(tr.snapshots.back().t == doctest::Approx(0.03).epsilon(1e-12));
  }
  SUBCASE("grim reaper translates") {
    const double T = 0.02;
    std::vector<double> err;
    for (int m : {32, 64}) {
      const auto g = RectGrid::span(-1.375, 1.375, 2 * m + 1, -0.5, 0.5, m + 1);
      auto exact = [](double x, double, double t) { return t - std::log(std::cos(x)); };
      FlowOptions o;
      o.boundary = exact;
      o.snapshot_every = 1000000;
      const double dt = 0.2 * std::pow(std::min(g.dx, g.dy), 2);
      const auto tr = mcf_flow(GraphFunction::sample(g, [&](double x, double y) { return exact(x, y, 0); }), T, dt, o);
      const auto& last = tr.snapshots.back();
      double e = 0;
      for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) e = std::max(e, std::abs(last.u[g.index(i, j)] - exact(g.x(i), g.y(j), last.t)));
      err.push_back(e);
    }
    CHECK(err[1] < 1e-3);
    CHECK(err[0] / err[1] > 3.0);
    CHECK(err[0] / err[1] < 5.0);
  }
  SUBCASE("property: ordered graphs stay ordered") {
    const auto g = RectGrid::span(-1, 1, 25, -1, 1, 25);
    auto lo = [](double x, double y) { return 0.4 * std::sin(3 * x) * std::cos(2 * y); };
    auto hi = [](double x, double y) { return 0.4 * std::sin(3 * x) * std::cos(2 * y) + 0.05 + 0.2 * std::exp(-4 * (x * x + y * y)); };
    const double dt = 0.2 * g.dx * g.dx;
    const auto a = mcf_flow(GraphFunction::sample(g, lo), 0.1, dt);
    const auto b = mcf_flow(GraphFunction::sample(g, hi), 0.1, dt);
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    for (std::size_t k = 0; k < a.snapshots.size(); ++k)
      for (std::size_t n = 0; n < g.size(); ++n) CHECK(b.snapshots[k].u[n] - a.snapshots[k].u[n] >= -1e-12);
  }
  SUBCASE("stationary solutions are fixed points") {
    const auto g = RectGrid::span(1.2, 2.2, 33, -0.5, 0.5, 33);
    const auto u = solve_dirichlet(g, catenoid_graph).u;
    const auto tr = mcf_flow(u, 0.01, 0.2 * g.dx * g.dx);
    double drift = 0;
    for (std::size_t n = 0; n < g.size(); ++n) drift = std::max(drift, std::abs(tr.snapshots.back().u[n] - u.u[n]));
    CHECK(drift < 1e-10);
  }
  SUBCASE("guards") {
    const auto g = RectGrid::span(0, 1, 11, 0, 1, 11);
    const auto u = GraphFunction::sample(g, [](double x, double) { return x; });
    CHECK_THROWS_AS(mcf_flow(u, 0.1, 0.21 * 0.01), StabilityViolation);
    const auto big = GraphFunction::sample(g, [](double x, double) { return 2e6 * x; });
    CHECK_THROWS_AS(mcf_flow(big, 0.01, 0.001), BlowUp);
  }
}

TEST_CASE("shrinking spheres") {
  CHECK(sphere_radius(1, 2, 0).closed_form == 1.0);
  CHECK(sphere_radius(1, 2, 0).ode == doctest::Approx(1.0));
  CHECK(sphere_radius(1, 2, 0.25 * (1 - 1e-10)).closed_form < 1e-4);
  // Errors grow like 1/r near extinction; r = 1e-3 is still within 1e-10.
  const auto near = sphere_radius(1, 2, 0.25 * (1 - 1e-6));
  CHECK(std::abs(near.ode - near.closed_form) < 1e-10);
  CHECK_THROWS_AS(sphere_radius(1, 2, 0.25), PastExtinction);
  const auto r = sphere_radius(2, 3, 0.5);
  CHECK(r.closed_form == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(r.ode - 1.0) < 1e-10);
  for (double R : {0.5, 1.0, 3.0})
    for (int n : {1, 2, 5})
      for (int k = 0; k < 20; ++k) {
        const double t = 0.99 * R * R / (2 * n) * k / 19;
        const auto s = sphere_radius(R, n, t);
        CHECK(std::abs(s.ode - s.closed_form) < 1e-10);
      }
}

TEST_CASE("gradient estimate report") {
  const auto g = RectGrid::span(-1, 1, 41, -1, 1, 41);
  const double dt = 0.2 * g.dx * g.dx;
  const auto flat = mcf_flow(GraphFunction::sample(g, [](double, double) { return 0.3; }), 0.05, dt);
  const auto rf = gradient_estimate_report(flat, 0.3, 0, 0);
  CHECK(rf.lhs_is_sentinel);
  CHECK(rf.lhs == kLogZeroSentinel);
  CHECK(rf.lhs < rf.rhs);

  // Grim reaper profiles scaled in height: the bound grows like h^2.
  std::vector<double> rhs;
  for (double h : {1.0, 2.0, 4.0}) {
    const auto tr = mcf_flow(GraphFunction::sample(g, [h](double x, double) { return -h * std::log(std::cos(x)); }), 0.05, dt);
    const auto rep = gradient_estimate_report(tr, 0.3, 0.1, 0);
    CHECK_FALSE(rep.lhs_is_sentinel);
    CHECK(rep.lhs < rep.rhs);
    rhs.push_back(rep.rhs);
  }
  CHECK(rhs[2] > rhs[1]);
  CHECK(rhs[1] > rhs[0]);
  // (1 + a h)^2: second differences in h = 1, 2, 4 are consistent with a quadratic
  const double a = std::sqrt(rhs[0]) - 1;
  CHECK(std::sqrt(rhs[1]) == doctest::Approx(1 + 2 * a).epsilon(1e-12));
  CHECK(std::sqrt(rhs[2]) == doctest::Approx(1 + 4 * a).epsilon(1e-12));

  const auto cg = RectGrid::span(1.2, 2.8, 49, -0.8, 0.8, 49);
  const auto stat = mcf_flow(solve_dirichlet(cg, catenoid_graph).u, 0.05, 0.2 * cg.dx * cg.dx);
  const auto r1 = gradient_estimate_report(stat, 0.2, 2.0, 0);
  const auto r2 = gradient_estimate_report(stat, 0.3, 2.0, 0);
  CHECK(r1.t_eval < r2.t_eval);
  CHECK(r1.lhs == doctest::Approx(r2.lhs).epsilon(1e-9));

  CHECK_THROWS_AS(gradient_estimate_report(flat, 0.6, 0, 0), InsufficientDomain);
  CHECK_THROWS_AS(gradient_estimate_report(flat, 0.45, 0, 0), InsufficientDomain);
}
