#include "minsurf/graphflow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "minsurf/errors.hpp"
#include "minsurf/monotonicity.hpp"
#include "minsurf/parallel.hpp"
#include "minsurf/surfaces.hpp"

namespace minsurf::graphflow {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Diff {
  double ux, uy, uxx, uyy, uxy;
};

Diff diff(const RectGrid& g, const std::vector<double>& u, int i, int j) {
  auto v = [&](int a, int b) { return u[g.index(a, b)]; };
  Diff d;
  d.ux = (v(i + 1, j) - v(i - 1, j)) / (2 * g.dx);
  d.uy = (v(i, j + 1) - v(i, j - 1)) / (2 * g.dy);
  d.uxx = (v(i + 1, j) - 2 * v(i, j) + v(i - 1, j)) / (g.dx * g.dx);
  d.uyy = (v(i, j + 1) - 2 * v(i, j) + v(i, j - 1)) / (g.dy * g.dy);
  d.uxy = (v(i + 1, j + 1) - v(i + 1, j - 1) - v(i - 1, j + 1) + v(i - 1, j - 1)) /
          (4 * g.dx * g.dy);
  return d;
}

// a u_xx - 2 b u_xy + c u_yy
double quasilinear(const Diff& d) {
  return (1 + d.uy * d.uy) * d.uxx - 2 * d.ux * d.uy * d.uxy + (1 + d.ux * d.ux) * d.uyy;
}

int interior_count(const RectGrid& g) { return (g.nx - 2) * (g.ny - 2); }
int unknown(const RectGrid& g, int i, int j) { return (i - 1) * (g.ny - 2) + (j - 1); }

std::vector<double> quasilinear_field(const RectGrid& g, const std::vector<double>& u) {
  std::vector<double> F(interior_count(g));
  parallel_for(1, static_cast<std::size_t>(g.nx - 1), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    for (int j = 1; j < g.ny - 1; ++j) F[unknown(g, i, j)] = quasilinear(diff(g, u, i, j));
  });
  return F;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

RectGrid RectGrid::span(double xa, double xb, int nx_, double ya, double yb, int ny_) {
  RectGrid g;
  g.nx = nx_;
  g.ny = ny_;
  g.x0 = xa;
  g.y0 = ya;
  g.dx = (xb - xa) / (nx_ - 1);
  g.dy = (yb - ya) / (ny_ - 1);
  return g;
}

GraphFunction::GraphFunction(RectGrid g, std::vector<double> values, double time)
    : grid(g), u(std::move(values)), t(time) {
  if (grid.nx < 5 || grid.ny < 5) throw InvalidInput("GraphFunction: at least 5 points per axis");
  if (!(grid.dx > 0 && grid.dy > 0)) throw InvalidInput("GraphFunction: spacings must be positive");
  if (u.size() != grid.size()) throw InvalidInput("GraphFunction: sample count mismatch");
  for (double v : u)
    if (!std::isfinite(v)) throw InvalidInput("GraphFunction: non-finite sample");
}

GraphFunction GraphFunction::sample(const RectGrid& g, const std::function<double(double, double)>& f,
                                    double time) {
  std::vector<double> u(g.size());
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) u[g.index(i, j)] = f(g.x(i), g.y(j));
  return GraphFunction(g, std::move(u), time);
}

geom::ParamPatch GraphFunction::lift() const {
  return surfaces::graph_lift(grid.x0, grid.dx, grid.nx, grid.y0, grid.dy, grid.ny, u);
}

std::vector<double> mse_residual(const GraphFunction& f) {
  const auto& g = f.grid;
  std::vector<double> out(g.size(), kNaN);
  parallel_for(1, static_cast<std::size_t>(g.nx - 1), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    for (int j = 1; j < g.ny - 1; ++j) {
      const Diff d = diff(g, f.u, i, j);
      const double W = std::sqrt(1 + d.ux * d.ux + d.uy * d.uy);
      out[g.index(i, j)] = quasilinear(d) / (W * W * W);
    }
  });
  return out;
}

double max_abs(const std::vector<double>& field) {
  double m = 0.0;
  for (double v : field)
    if (std::isfinite(v)) m = std::max(m, std::abs(v));
  return m;
}

GraphFunction harmonic_extension(const GraphFunction& boundary) {
  const auto& g = boundary.grid;
  const int N = interior_count(g);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
  const double cx = 1 / (g.dx * g.dx), cy = 1 / (g.dy * g.dy);
  for (int i = 1; i < g.nx - 1; ++i)
    for (int j = 1; j < g.ny - 1; ++j) {
      const int row = unknown(g, i, j);
      trip.emplace_back(row, row, -2 * (cx + cy));
      const int ni[4] = {i + 1, i - 1, i, i};
      const int nj[4] = {j, j, j + 1, j - 1};
      const double w[4] = {cx, cx, cy, cy};
      for (int k = 0; k < 4; ++k) {
        if (g.is_boundary(ni[k], nj[k]))
          rhs[row] -= w[k] * boundary.at(ni[k], nj[k]);
        else
          trip.emplace_back(row, unknown(g, ni[k], nj[k]), w[k]);
      }
    }
  Eigen::SparseMatrix<double> A(N, N);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw NoConvergence("harmonic_extension: factorization failed");
  const Eigen::VectorXd x = lu.solve(rhs);
  GraphFunction out = boundary;
  for (int i = 1; i < g.nx - 1; ++i)
    for (int j = 1; j < g.ny - 1; ++j) out.u[g.index(i, j)] = x[unknown(g, i, j)];
  return out;
}

SolveResult solve_dirichlet(const GraphFunction& boundary, const SolveOptions& opts) {
  const auto& g = boundary.grid;
  const int N = interior_count(g);
  SolveResult res;
  res.u = harmonic_extension(boundary);
  std::vector<double>& u = res.u.u;

  std::vector<double> F = quasilinear_field(g, u);
  double merit = norm2(F);
  res.residual_history.push_back(merit);

  for (int iter = 0;; ++iter) {
    if (max_abs(mse_residual(res.u)) <= opts.tol) {
      res.iterations = iter;
      return res;
    }
    if (iter >= opts.max_iter)
      throw NoConvergence("solve_dirichlet: no convergence after " + std::to_string(opts.max_iter) +
                          " Newton steps");

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(N) * 9);
    for (int i = 1; i < g.nx - 1; ++i)
      for (int j = 1; j < g.ny - 1; ++j) {
        const Diff d = diff(g, u, i, j);
        const double dFdux = -2 * d.uy * d.uxy + 2 * d.ux * d.uyy;
        const double dFduy = 2 * d.uy * d.uxx - 2 * d.ux * d.uxy;
        const double a = 1 + d.uy * d.uy, c = 1 + d.ux * d.ux, b2 = -2 * d.ux * d.uy;
        const double hx = g.dx, hy = g.dy;
        struct Entry {
          int di, dj;
          double w;
        };
        const Entry entries[9] = {
            {0, 0, -2 * a / (hx * hx) - 2 * c / (hy * hy)},
            {1, 0, a / (hx * hx) + dFdux / (2 * hx)},
            {-1, 0, a / (hx * hx) - dFdux / (2 * hx)},
            {0, 1, c / (hy * hy) + dFduy / (2 * hy)},
            {0, -1, c / (hy * hy) - dFduy / (2 * hy)},
            {1, 1, b2 / (4 * hx * hy)},
            {-1, -1, b2 / (4 * hx * hy)},
            {1, -1, -b2 / (4 * hx * hy)},
            {-1, 1, -b2 / (4 * hx * hy)},
        };
        const int row = unknown(g, i, j);
        for (const auto& e : entries) {
          const int a_i = i + e.di, a_j = j + e.dj;
          if (!g.is_boundary(a_i, a_j)) trip.emplace_back(row, unknown(g, a_i, a_j), e.w);
        }
      }
    Eigen::SparseMatrix<double> J(N, N);
    J.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success) throw NoConvergence("solve_dirichlet: singular Jacobian");
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(F.data(), N);
    const Eigen::VectorXd delta = lu.solve(rhs);

    double lambda = 1.0;
    bool accepted = false;
    std::vector<double> trial = u;
    for (int h = 0; h <= opts.max_halvings; ++h, lambda *= 0.5) {
      for (int i = 1; i < g.nx - 1; ++i)
        for (int j = 1; j < g.ny - 1; ++j)
          trial[g.index(i, j)] = u[g.index(i, j)] + lambda * delta[unknown(g, i, j)];
      std::vector<double> Ft = quasilinear_field(g, trial);
      const double mt = norm2(Ft);
      if (std::isfinite(mt) && mt < merit) {
        u = trial;
        F = std::move(Ft);
        merit = mt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (max_abs(mse_residual(res.u)) <= opts.tol) {
        res.iterations = iter;
        return res;
      }
      throw NoConvergence("solve_dirichlet: line search failed to reduce the residual");
    }
    res.residual_history.push_back(merit);
  }
}

SolveResult solve_dirichlet(const RectGrid& grid, const std::function<double(double, double)>& b,
                            const SolveOptions& opts) {
  GraphFunction bf = GraphFunction::sample(grid, [&](double x, double y) { return b(x, y); });
  return solve_dirichlet(bf, opts);
}

HeinzReport heinz_report(const GraphFunction& u, double cx, double cy, double r0, double sigma,
                         double minimal_tol) {
  const auto& g = u.grid;
  if (!(r0 > 0 && sigma > 0 && sigma < r0)) throw InvalidInput("heinz_report: need 0 < sigma < r0");
  if (cx - r0 < g.x(1) || cx + r0 > g.x(g.nx - 2) || cy - r0 < g.y(1) || cy + r0 > g.y(g.ny - 2))
    throw InsufficientDomain("heinz_report: disk leaves the grid interior");
  const auto res = mse_residual(u);
  const auto curv = geom::curvatures(u.lift());
  HeinzReport rep;
  for (int i = 1; i < g.nx - 1; ++i)
    for (int j = 1; j < g.ny - 1; ++j) {
      const double r = std::hypot(g.x(i) - cx, g.y(j) - cy);
      const std::size_t k = g.index(i, j);
      if (r <= r0) rep.scaled_residual = std::max(rep.scaled_residual, r0 * std::abs(res[k]));
      if (r <= r0 - sigma && curv.nodes[k].valid) rep.sup_A2 = std::max(rep.sup_A2, curv.nodes[k].A2);
    }
  if (rep.scaled_residual > minimal_tol)
    throw NotMinimal("heinz_report: r0 max|H| = " + std::to_string(rep.scaled_residual) +
                     " exceeds the minimality tolerance");
  rep.value = sigma * sigma * rep.sup_A2;
  return rep;
}

double sup_gradient(const GraphFunction& f) {
  const auto& g = f.grid;
  double m = 0.0;
  for (int i = 1; i < g.nx - 1; ++i)
    for (int j = 1; j < g.ny - 1; ++j) {
      const Diff d = diff(g, f.u, i, j);
      m = std::max(m, std::hypot(d.ux, d.uy));
    }
  return m;
}

namespace {

Snapshot snapshot(const GraphFunction& f, const FlowOptions& opts) {
  Snapshot s;
  s.t = f.t;
  s.u = f.u;
  s.sup_du = sup_gradient(f);
  const geom::ParamPatch patch = f.lift();
  if (opts.curvature) s.sup_A2 = geom::curvatures(patch).max_A2();
  s.gauss_density = kNaN;
  if (opts.gauss && opts.gauss_T0 > f.t)
    s.gauss_density = monotonicity::gaussian_weight_integral(patch, opts.gauss_center,
                                                             opts.gauss_T0 - f.t)
                          .value;
  return s;
}

}  // namespace

FlowTrace mcf_flow(const GraphFunction& u0, double T, double dt, const FlowOptions& opts) {
  const auto& g = u0.grid;
  if (!(dt > 0) || !(T >= 0)) throw InvalidInput("mcf_flow: need dt > 0 and T >= 0");
  const double limit = 0.2 * std::pow(std::min(g.dx, g.dy), 2);
  if (dt > limit * (1 + 1e-12))
    throw StabilityViolation("mcf_flow: dt = " + std::to_string(dt) + " exceeds 0.2 min(dx,dy)^2 = " +
                             std::to_string(limit));
  if (opts.snapshot_every < 1) throw InvalidInput("mcf_flow: snapshot_every must be >= 1");

  FlowTrace trace;
  trace.grid = g;
  GraphFunction cur = u0;
  trace.snapshots.push_back(snapshot(cur, opts));

  const long steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  std::vector<double> next(cur.u);
  const double t_start = u0.t;
  for (long k = 0; k < steps; ++k) {
    const double t0 = t_start + k * dt;
    const double h = std::min(dt, t_start + T - t0);
    parallel_for(1, static_cast<std::size_t>(g.nx - 1), [&](std::size_t ii) {
      const int i = static_cast<int>(ii);
      for (int j = 1; j < g.ny - 1; ++j) {
        const Diff d = diff(g, cur.u, i, j);
        const double W2 = 1 + d.ux * d.ux + d.uy * d.uy;
        next[g.index(i, j)] = cur.u[g.index(i, j)] + h * quasilinear(d) / W2;
      }
    });
    const double t1 = (k + 1 == steps) ? t_start + T : t_start + (k + 1) * dt;
    if (opts.boundary) {
      for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
          if (g.is_boundary(i, j)) next[g.index(i, j)] = opts.boundary(g.x(i), g.y(j), t1);
    }
    double sup = 0.0;
    for (double v : next) sup = std::max(sup, std::abs(v));
    if (!(sup <= 1e6)) throw BlowUp("mcf_flow: sup |u| exceeded 1e6 at t = " + std::to_string(t1));
    cur.u.swap(next);
    next = cur.u;
    cur.t = t1;
    if ((k + 1) % opts.snapshot_every == 0 || k + 1 == steps)
      trace.snapshots.push_back(snapshot(cur, opts));
  }
  return trace;
}

SphereRadius sphere_radius(double R, int n, double t, double eta) {
  if (!(R > 0) || n < 1 || !(t >= 0)) throw InvalidInput("sphere_radius: need R > 0, n >= 1, t >= 0");
  const double T = R * R / (2.0 * n);
  if (t >= T) throw PastExtinction("sphere_radius: t is at or beyond the extinction time R^2/(2n)");
  SphereRadius out;
  out.closed_form = std::sqrt(R * R - 2.0 * n * t);
  auto f = [n](double r) { return -n / r; };
  double r = R, s = 0.0;
  while (s < t) {
    const double h = std::min(t - s, eta * r * r / n);
    const double k1 = f(r), k2 = f(r + 0.5 * h * k1), k3 = f(r + 0.5 * h * k2), k4 = f(r + h * k3);
    r += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    s += h;
  }
  out.ode = r;
  return out;
}

GradientReport gradient_estimate_report(const FlowTrace& trace, double r, double cx, double cy,
                                        double C, int n) {
  const auto& g = trace.grid;
  if (!(r > 0) || trace.snapshots.empty()) throw InvalidInput("gradient_estimate_report: bad input");
  const double rb = std::sqrt(2.0 * n + 1) * r;
  if (cx - rb < g.x(0) || cx + rb > g.x(g.nx - 1) || cy - rb < g.y(0) || cy + rb > g.y(g.ny - 1))
    throw InsufficientDomain("gradient_estimate_report: ball B_{sqrt(2n+1) r} leaves the grid");
  const double tstar = trace.snapshots.front().t + r * r / (4.0 * n);
  const Snapshot* snap = nullptr;
  for (const auto& s : trace.snapshots)
    if (s.t >= tstar - 1e-12 * std::max(1.0, tstar)) {
      snap = &s;
      break;
    }
  if (!snap) throw InsufficientDomain("gradient_estimate_report: trace ends before r^2/(4n)");

  GradientReport rep;
  rep.t_eval = snap->t;
  const int i = static_cast<int>(std::lround((cx - g.x0) / g.dx));
  const int j = static_cast<int>(std::lround((cy - g.y0) / g.dy));
  if (i < 1 || j < 1 || i > g.nx - 2 || j > g.ny - 2)
    throw InsufficientDomain("gradient_estimate_report: center is not an interior node");
  const Diff d = diff(g, snap->u, i, j);
  const double du = std::hypot(d.ux, d.uy);
  if (du > 0) {
    rep.lhs = std::log(du);
  } else {
    rep.lhs = kLogZeroSentinel;
    rep.lhs_is_sentinel = true;
  }
  double sup0 = 0.0;
  const auto& u0 = trace.snapshots.front().u;
  for (int a = 0; a < g.nx; ++a)
    for (int b = 0; b < g.ny; ++b)
      if (std::hypot(g.x(a) - cx, g.y(b) - cy) <= rb) sup0 = std::max(sup0, std::abs(u0[g.index(a, b)]));
  rep.rhs = C * std::pow(1.0 + sup0 / r, 2);
  return rep;
}

}  // namespace minsurf::graphflow
