#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "minsurf/common.hpp"

namespace minsurf::geom {

/// Rectangular parameter lattice (s_i, t_j) = (s0 + i ds, t0 + j dt).
///
/// With `periodic_t` the second parameter is closed: node j = nt is node 0
/// again, so `nt * dt` is the period and no t-boundary exists.
struct ParamGrid {
  int ns = 0;
  int nt = 0;
  double s0 = 0.0;
  double ds = 1.0;
  double t0 = 0.0;
  double dt = 1.0;
  bool periodic_t = false;

  double s(int i) const { return s0 + i * ds; }
  double t(int j) const { return t0 + j * dt; }
  std::size_t size() const { return static_cast<std::size_t>(ns) * nt; }

  /// Flat index; j is wrapped when the grid is periodic.
  std::size_t index(int i, int j) const {
    if (periodic_t) j = ((j % nt) + nt) % nt;
    return static_cast<std::size_t>(i) * nt + j;
  }
  bool is_boundary(int i, int j) const {
    return i == 0 || i == ns - 1 || (!periodic_t && (j == 0 || j == nt - 1));
  }
  /// Distance (in nodes) to the nearest parameter boundary.
  int ring(int i, int j) const;
  /// Number of cells along t (nt for periodic grids).
  int cells_t() const { return periodic_t ? nt : nt - 1; }

  /// Uniform grid spanning [s_lo, s_hi] x [t_lo, t_hi]; for periodic grids the
  /// t-range is the full period and t_hi itself is not sampled.
  static ParamGrid span(double s_lo, double s_hi, int ns, double t_lo, double t_hi, int nt,
                        bool periodic_t = false);
};

/// Sampled immersion of a parameter lattice into R^3.
class ParamPatch {
 public:
  ParamPatch(ParamGrid grid, std::vector<Vec3> points);

  static ParamPatch sample(const ParamGrid& grid,
                           const std::function<Vec3(double, double)>& map);

  const ParamGrid& grid() const { return grid_; }
  const std::vector<Vec3>& points() const { return points_; }
  const Vec3& at(int i, int j) const { return points_[grid_.index(i, j)]; }

  /// Boundary node indices in deterministic order (s-edges, then t-edges).
  std::vector<std::size_t> boundary_indices() const;

 private:
  ParamGrid grid_;
  std::vector<Vec3> points_;
};

/// Per-node first and second fundamental forms. The second form is taken
/// against n = (X_s x X_t)/|X_s x X_t| with the sign that makes H the
/// divergence of n, so d/dt Area(X + t phi n) = integral of phi H.
struct FundamentalForms {
  double E = 0, F = 0, G = 0;
  double e = 0, f = 0, g = 0;
  Vec3 normal = Vec3::Zero();
  bool valid = false;
};

struct FormField {
  ParamGrid grid;
  std::vector<FundamentalForms> nodes;
};

struct Curvatures {
  double H = 0;   // kappa1 + kappa2
  double K = 0;
  double A2 = 0;  // kappa1^2 + kappa2^2
  double k1 = 0;  // k1 <= k2
  double k2 = 0;
  bool valid = false;
};

struct CurvatureField {
  ParamGrid grid;
  std::vector<Curvatures> nodes;

  double max_abs_H() const;
  double max_A2() const;
};

/// Centered second-order forms. The second form differentiates node normals,
/// so it is valid from ring 2 inward; outer nodes are marked invalid.
/// Throws DegenerateMetric when EG - F^2 <= 0 somewhere.
FormField fundamental_forms(const ParamPatch& patch);

/// Shape-operator curvatures with a closed-form 2x2 eigen-solve.
CurvatureField curvature_scalars(const FormField& forms);

/// Convenience: curvature_scalars(fundamental_forms(patch)).
CurvatureField curvatures(const ParamPatch& patch);

/// Laplace–Beltrami operator in divergence form with metric weights at
/// half nodes. The output is NaN wherever the stencil touches a boundary
/// node or a non-finite input value.
std::vector<double> surface_laplacian(std::span<const double> field, const ParamPatch& patch);

/// Midpoint cell quadrature. For every cell the callback receives the cell
/// midpoint (average of the four corners), the cell area sqrt(EG-F^2) ds dt
/// and the cell corner indices (i, j) of its lower-left node.
void for_each_cell(const ParamPatch& patch,
                   const std::function<void(const Vec3& mid, double area, int i, int j)>& fn);

using Region = std::function<bool(const Vec3&)>;

/// Area of the cells whose midpoint lies in `region` (all cells when empty).
double patch_area(const ParamPatch& patch, const Region& region = {});

/// Integral of a function of position over the accepted cells.
double integrate(const ParamPatch& patch, const std::function<double(const Vec3&)>& fn,
                 const Region& region = {});

struct FirstVariation {
  double numeric_derivative = 0;  // (A(h) - A(-h)) / 2h
  double flux_integral = 0;       // integral of phi H
};

/// Compares the centered difference of the area of normal offsets with the
/// quadrature of phi H. phi must vanish on the two outermost rings.
FirstVariation first_variation(const ParamPatch& patch, std::span<const double> phi, double h);

/// Largest distance by which an interior node leaves the convex hull of the
/// boundary nodes (negative when every node is strictly inside).
double convex_hull_check(const ParamPatch& patch);

struct SimonsReport {
  double max_residual = 0;   // max |Lap|A|^2 + 2|A|^4 - 2|grad A|^2|
  double min_inequality = 0; // min (Lap|A|^2 + 2|A|^4)
  double max_abs_H = 0;
  std::size_t nodes = 0;     // nodes where every term was available
};

/// Simons identity residual on a numerically minimal patch. Throws
/// NotMinimal when max |H| exceeds `h_tol`.
SimonsReport simons_residual(const ParamPatch& patch, double h_tol = 1e-3);

/// max(| |X_s| - |X_t| |, |X_s . X_t|) over interior nodes.
double conformality_defect(const ParamPatch& patch);

}  // namespace minsurf::geom
