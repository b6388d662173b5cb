#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "minsurf/geomcore.hpp"

namespace minsurf::graphflow {

/// Uniform rectangular grid, node (i, j) at (x0 + i dx, y0 + j dy), stored
/// row-major in i.
struct RectGrid {
  double x0 = 0, dx = 1;
  int nx = 0;
  double y0 = 0, dy = 1;
  int ny = 0;

  static RectGrid span(double xa, double xb, int nx, double ya, double yb, int ny);
  double x(int i) const { return x0 + i * dx; }
  double y(int j) const { return y0 + j * dy; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * ny + j; }
  bool is_boundary(int i, int j) const { return i == 0 || j == 0 || i == nx - 1 || j == ny - 1; }
};

struct GraphFunction {
  RectGrid grid;
  std::vector<double> u;
  double t = 0.0;

  GraphFunction() = default;
  GraphFunction(RectGrid g, std::vector<double> values, double time = 0.0);
  static GraphFunction sample(const RectGrid& g, const std::function<double(double, double)>& f,
                              double time = 0.0);
  double at(int i, int j) const { return u[grid.index(i, j)]; }
  geom::ParamPatch lift() const;
};

/// div(du / sqrt(1 + |du|^2)) at interior nodes (NaN on the boundary).
std::vector<double> mse_residual(const GraphFunction& u);

/// Max of |field| over finite entries.
double max_abs(const std::vector<double>& field);

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 50;
  int max_halvings = 30;
};

struct SolveResult {
  GraphFunction u;
  int iterations = 0;
  std::vector<double> residual_history;  // line-search merit per accepted step
};

/// Damped Newton on the centered-difference minimal surface equation with the
/// boundary entries of `boundary` held fixed (interior entries are ignored).
/// Starts from the harmonic extension. Throws NoConvergence.
SolveResult solve_dirichlet(const GraphFunction& boundary, const SolveOptions& opts = {});

/// Same, with boundary values taken from a function.
SolveResult solve_dirichlet(const RectGrid& grid, const std::function<double(double, double)>& b,
                            const SolveOptions& opts = {});

/// Harmonic extension of the boundary entries (five-point Laplacian).
GraphFunction harmonic_extension(const GraphFunction& boundary);

struct HeinzReport {
  double value = 0;       // sigma^2 sup |A|^2 over D_{r0 - sigma}
  double sup_A2 = 0;
  double scaled_residual = 0;  // r0 max |H| on D_{r0}
};

/// Throws NotMinimal when r0 max |H| on D_{r0}(center) exceeds `minimal_tol`,
/// InsufficientDomain when the disk leaves the grid interior.
HeinzReport heinz_report(const GraphFunction& u, double cx, double cy, double r0, double sigma,
                         double minimal_tol = 1e-3);

struct Snapshot {
  double t = 0;
  std::vector<double> u;
  double sup_du = 0;
  double sup_A2 = 0;
  double gauss_density = 0;
};

struct FlowTrace {
  RectGrid grid;
  std::vector<Snapshot> snapshots;

  GraphFunction at(std::size_t k) const { return {grid, snapshots[k].u, snapshots[k].t}; }
};

struct FlowOptions {
  int snapshot_every = 1;
  /// Time-dependent Dirichlet data; when empty the initial boundary is held.
  std::function<double(double, double, double)> boundary;  // (x, y, t)
  /// Gaussian density of each snapshot about (center, T0): tau = T0 - t.
  Vec3 gauss_center = Vec3::Zero();
  double gauss_T0 = 1.0;
  bool gauss = true;
  /// Skip the curvature pass per snapshot.
  bool curvature = true;
};

/// Forward Euler for u_t = (a u_xx - 2 b u_xy + c u_yy) / (1 + |du|^2).
/// Throws StabilityViolation when dt > 0.2 min(dx, dy)^2 and BlowUp when
/// sup |u| exceeds 1e6.
FlowTrace mcf_flow(const GraphFunction& u0, double T, double dt, const FlowOptions& opts = {});

struct SphereRadius {
  double closed_form = 0;
  double ode = 0;
};

/// sqrt(R^2 - 2 n t) and RK4 on r' = -n / r with steps eta r^2 / n.
/// Throws PastExtinction.
SphereRadius sphere_radius(double R, int n, double t, double eta = 1e-3);

struct GradientReport {
  double lhs = 0;        // log |du| at the center at t = r^2 / (4n)
  bool lhs_is_sentinel = false;
  double rhs = 0;        // C (1 + sup_{B} |u(., 0)| / r)^2
  double t_eval = 0;
};

inline constexpr double kLogZeroSentinel = -1e9;

/// Evaluates both sides of the gradient estimate on B_{sqrt(2n+1) r}(center).
/// Throws InsufficientDomain if the ball leaves the grid or the trace ends
/// before r^2 / (4n).
GradientReport gradient_estimate_report(const FlowTrace& trace, double r, double cx, double cy,
                                        double C = 1.0, int n = 2);

/// Sup of |du| over interior nodes (centered differences).
double sup_gradient(const GraphFunction& u);

}  // namespace minsurf::graphflow
