#include "minsurf/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "minsurf/errors.hpp"
#include "minsurf/quadrature.hpp"

namespace minsurf::monotonicity {

namespace {

void check_radii(const std::vector<double>& radii) {
  if (radii.empty()) throw InvalidInput("density: no radii given");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0)) throw InvalidInput("density: radii must be positive");
    if (k && !(radii[k] > radii[k - 1])) throw InvalidInput("density: radii must increase strictly");
  }
}

// Integrals of f over B_s(x0) for every radius, f bilinear in each cell from
// its corner values (f empty means f = 1).
std::vector<double> ball_integrals(const geom::ParamPatch& patch, const Vec3& x0,
                                   std::span<const double> f, const std::vector<double>& radii,
                                   int k) {
  const auto& g = patch.grid();
  const std::size_t m = radii.size();
  std::vector<quad::CompensatedSum> acc(m);
  const double smax2 = radii.back() * radii.back();
  for (int i = 0; i < g.ns - 1; ++i)
    for (int j = 0; j < g.cells_t(); ++j) {
      const Vec3& p00 = patch.at(i, j);
      const Vec3& p10 = patch.at(i + 1, j);
      const Vec3& p01 = patch.at(i, j + 1);
      const Vec3& p11 = patch.at(i + 1, j + 1);
      double f00 = 1, f10 = 1, f01 = 1, f11 = 1;
      if (!f.empty()) {
        f00 = f[g.index(i, j)];
        f10 = f[g.index(i + 1, j)];
        f01 = f[g.index(i, j + 1)];
        f11 = f[g.index(i + 1, j + 1)];
      }
      // Quick reject: cell far outside the largest ball.
      const Vec3 c = 0.25 * (p00 + p10 + p01 + p11);
      const double rad = std::max({(p00 - c).norm(), (p10 - c).norm(), (p01 - c).norm(),
                                   (p11 - c).norm()});
      const double dc = (c - x0).norm();
      if (dc - rad > std::sqrt(smax2)) continue;
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
          const double u = (a + 0.5) / k, v = (b + 0.5) / k;
          const Vec3 X = (1 - u) * (1 - v) * p00 + u * (1 - v) * p10 + (1 - u) * v * p01 + u * v * p11;
          const Vec3 Xu = (1 - v) * (p10 - p00) + v * (p11 - p01);
          const Vec3 Xv = (1 - u) * (p01 - p00) + u * (p11 - p10);
          const double area = Xu.cross(Xv).norm() / (k * k);
          const double fv = (1 - u) * (1 - v) * f00 + u * (1 - v) * f10 + (1 - u) * v * f01 + u * v * f11;
          const double d2 = (X - x0).squaredNorm();
          for (std::size_t r = 0; r < m; ++r)
            if (d2 < radii[r] * radii[r]) acc[r].add(fv * area);
        }
    }
  std::vector<double> out(m);
  for (std::size_t r = 0; r < m; ++r) out[r] = acc[r].value();
  return out;
}

std::vector<bool> clipped_flags(const geom::ParamPatch& patch, const Vec3& x0,
                                const std::vector<double>& radii) {
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t k : patch.boundary_indices()) dmin = std::min(dmin, (patch.points()[k] - x0).norm());
  std::vector<bool> out;
  for (double s : radii) out.push_back(s >= dmin);
  return out;
}

// Every other node; returns nullopt when the grid does not coarsen evenly.
std::optional<geom::ParamPatch> coarsen(const geom::ParamPatch& patch) {
  const auto& g = patch.grid();
  if ((g.ns - 1) % 2 != 0) return std::nullopt;
  if (g.periodic_t ? g.nt % 2 != 0 : (g.nt - 1) % 2 != 0) return std::nullopt;
  geom::ParamGrid c = g;
  c.ns = (g.ns + 1) / 2;
  c.nt = g.periodic_t ? g.nt / 2 : (g.nt + 1) / 2;
  c.ds = 2 * g.ds;
  c.dt = 2 * g.dt;
  if (c.ns < 5 || c.nt < 5) return std::nullopt;
  std::vector<Vec3> pts(c.size());
  for (int i = 0; i < c.ns; ++i)
    for (int j = 0; j < c.nt; ++j) pts[c.index(i, j)] = patch.at(2 * i, 2 * j);
  return geom::ParamPatch(c, std::move(pts));
}

}  // namespace

DensitySeries density_ratio(const geom::ParamPatch& patch, const Vec3& x0,
                            const std::vector<double>& radii, const BallOptions& opts) {
  check_radii(radii);
  if (opts.supersample < 1) throw InvalidInput("density: supersample must be >= 1");
  DensitySeries out;
  out.center = x0;
  out.radii = radii;
  const auto I = ball_integrals(patch, x0, {}, radii, opts.supersample);
  for (std::size_t r = 0; r < radii.size(); ++r) out.values.push_back(I[r] / (kPi * radii[r] * radii[r]));
  out.clipped = clipped_flags(patch, x0, radii);
  if (opts.estimate_error) {
    if (const auto coarse = coarsen(patch)) {
      const auto Ic = ball_integrals(*coarse, x0, {}, radii, opts.supersample);
      for (std::size_t r = 0; r < radii.size(); ++r)
        out.eps_quad = std::max(out.eps_quad,
                                std::abs(Ic[r] / (kPi * radii[r] * radii[r]) - out.values[r]));
    }
  }
  return out;
}

double monotone_defect(const DensitySeries& series) {
  if (series.values.size() < 2) throw InvalidInput("monotone_defect: need at least two values");
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < series.values.size(); ++k)
    d = std::min(d, series.values[k + 1] - series.values[k]);
  return d;
}

std::vector<double> weighted_mean_value(const geom::ParamPatch& patch, const Vec3& x0,
                                        std::span<const double> f, const std::vector<double>& radii,
                                        const BallOptions& opts, double subharmonic_tol) {
  check_radii(radii);
  const auto& g = patch.grid();
  if (f.size() != g.size()) throw InvalidInput("weighted_mean_value: f size mismatch");
  for (double v : f)
    if (!(v >= 0)) throw NotSubharmonic("weighted_mean_value: f must be non-negative");
  const auto lap = geom::surface_laplacian(f, patch);
  for (double v : lap)
    if (std::isfinite(v) && v < -subharmonic_tol)
      throw NotSubharmonic("weighted_mean_value: surface Laplacian of f is negative (" +
                           std::to_string(v) + ")");
  const auto I = ball_integrals(patch, x0, f, radii, opts.supersample);
  std::vector<double> out;
  for (std::size_t r = 0; r < radii.size(); ++r) out.push_back(I[r] / (radii[r] * radii[r]));
  return out;
}

GaussianValue gaussian_weight_integral(const geom::ParamPatch& patch, const Vec3& X0, double tau,
                                       int n) {
  if (!(tau > 0)) throw InvalidInput("gaussian density: tau must be positive");
  GaussianValue out;
  for (std::size_t k : patch.boundary_indices())
    out.boundary_weight = std::max(out.boundary_weight,
                                   std::exp(-(patch.points()[k] - X0).squaredNorm() / (4 * tau)));
  out.truncated = out.boundary_weight > 1e-8;
  // Window: weight >= 1e-16 of the maximum, exponent cut at log(1e16).
  double dmin2 = std::numeric_limits<double>::infinity();
  geom::for_each_cell(patch, [&](const Vec3& mid, double, int, int) {
    dmin2 = std::min(dmin2, (mid - X0).squaredNorm());
  });
  const double cut = dmin2 + 4 * tau * std::log(1e16);
  quad::CompensatedSum acc;
  geom::for_each_cell(patch, [&](const Vec3& mid, double area, int, int) {
    const double d2 = (mid - X0).squaredNorm();
    if (d2 <= cut) acc.add(std::exp(-d2 / (4 * tau)) * area);
  });
  out.value = std::pow(4 * kPi * tau, -0.5 * n) * acc.value();
  return out;
}

std::vector<GaussianValue> gaussian_density(const graphflow::FlowTrace& trace, const Vec3& X0,
                                            double T0) {
  std::vector<GaussianValue> out;
  for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
    if (!(T0 > trace.snapshots[k].t))
      throw InvalidInput("gaussian_density: reference time must exceed every snapshot time");
    out.push_back(gaussian_weight_integral(trace.at(k).lift(), X0, T0 - trace.snapshots[k].t));
  }
  return out;
}

double nonincreasing_defect(const std::vector<double>& values) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < values.size(); ++k) d = std::min(d, values[k] - values[k + 1]);
  return values.size() < 2 ? 0.0 : d;
}

}  // namespace minsurf::monotonicity
