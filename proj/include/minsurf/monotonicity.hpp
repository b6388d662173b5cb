#pragma once

#include <span>
#include <vector>

#include "minsurf/geomcore.hpp"
#include "minsurf/graphflow.hpp"

namespace minsurf::monotonicity {

/// Theta_{x0}(s) = Area(B_s(x0) cap Sigma) / (pi s^2) for a 2-dimensional Sigma.
struct DensitySeries {
  Vec3 center = Vec3::Zero();
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<bool> clipped;  // ball reaches the parameter boundary
  double eps_quad = 0;        // max |Theta - Theta at half resolution|
};

struct BallOptions {
  /// Each cell is split into k x k bilinear sub-cells for the inclusion test.
  int supersample = 1;
  /// Compare against the patch restricted to every other node.
  bool estimate_error = true;
};

/// Throws InvalidInput unless the radii are positive and strictly increasing.
DensitySeries density_ratio(const geom::ParamPatch& patch, const Vec3& x0,
                            const std::vector<double>& radii, const BallOptions& opts = {});

/// min_i (Theta(s_{i+1}) - Theta(s_i)).
double monotone_defect(const DensitySeries& series);

/// s^{-2} times the integral of f over B_s(x0) cap Sigma, f given per node.
/// Throws NotSubharmonic when f < 0 somewhere or the surface Laplacian of f
/// drops below -subharmonic_tol.
std::vector<double> weighted_mean_value(const geom::ParamPatch& patch, const Vec3& x0,
                                        std::span<const double> f, const std::vector<double>& radii,
                                        const BallOptions& opts = {},
                                        double subharmonic_tol = 1e-6);

struct GaussianValue {
  double value = 0;
  double boundary_weight = 0;  // max of exp(-|X - X0|^2 / 4 tau) on boundary nodes
  bool truncated = false;      // boundary_weight > 1e-8
};

/// (4 pi tau)^{-n/2} times the integral of exp(-|X - X0|^2 / (4 tau)) over the
/// patch, skipping cells whose weight is below 1e-16 of the maximum.
GaussianValue gaussian_weight_integral(const geom::ParamPatch& patch, const Vec3& X0, double tau,
                                       int n = 2);

/// Gaussian density of every snapshot of a graph flow about (X0, T0), with
/// tau = T0 - t. Throws InvalidInput if some snapshot has t >= T0.
std::vector<GaussianValue> gaussian_density(const graphflow::FlowTrace& trace, const Vec3& X0,
                                            double T0);

/// min over consecutive values of (previous - next); >= 0 for a
/// non-increasing series.
double nonincreasing_defect(const std::vector<double>& values);

}  // namespace minsurf::monotonicity
