#include "minsurf/geomcore.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include "minsurf/errors.hpp"
#include "minsurf/hull.hpp"
#include "minsurf/parallel.hpp"
#include "minsurf/quadrature.hpp"

namespace minsurf::geom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Jet {
  Vec3 Xs, Xt, Xss, Xst, Xtt;
};

Jet jet(const ParamPatch& p, int i, int j) {
  const auto& g = p.grid();
  const Vec3& c = p.at(i, j);
  const Vec3& sp = p.at(i + 1, j);
  const Vec3& sm = p.at(i - 1, j);
  const Vec3& tp = p.at(i, j + 1);
  const Vec3& tm = p.at(i, j - 1);
  Jet d;
  d.Xs = (sp - sm) / (2.0 * g.ds);
  d.Xt = (tp - tm) / (2.0 * g.dt);
  d.Xss = (sp - 2.0 * c + sm) / (g.ds * g.ds);
  d.Xtt = (tp - 2.0 * c + tm) / (g.dt * g.dt);
  d.Xst = (p.at(i + 1, j + 1) - p.at(i + 1, j - 1) - p.at(i - 1, j + 1) + p.at(i - 1, j - 1)) /
          (4.0 * g.ds * g.dt);
  return d;
}

bool interior(const ParamGrid& g, int i, int j) { return g.ring(i, j) >= 1; }

// Inverse metric entries (g^ss, g^st, g^tt) and sqrt(det).
struct Metric {
  double E, F, G, det, sqrt_det, inv_ss, inv_st, inv_tt;
};

Metric metric(const Vec3& Xs, const Vec3& Xt) {
  Metric m;
  m.E = Xs.dot(Xs);
  m.F = Xs.dot(Xt);
  m.G = Xt.dot(Xt);
  m.det = m.E * m.G - m.F * m.F;
  m.sqrt_det = std::sqrt(std::max(m.det, 0.0));
  m.inv_ss = m.G / m.det;
  m.inv_st = -m.F / m.det;
  m.inv_tt = m.E / m.det;
  return m;
}

}  // namespace

int ParamGrid::ring(int i, int j) const {
  int r = std::min(i, ns - 1 - i);
  if (!periodic_t) r = std::min({r, j, nt - 1 - j});
  return r;
}

ParamGrid ParamGrid::span(double s_lo, double s_hi, int ns_, double t_lo, double t_hi, int nt_,
                          bool periodic) {
  ParamGrid g;
  g.ns = ns_;
  g.nt = nt_;
  g.s0 = s_lo;
  g.ds = (s_hi - s_lo) / (ns_ - 1);
  g.t0 = t_lo;
  g.dt = periodic ? (t_hi - t_lo) / nt_ : (t_hi - t_lo) / (nt_ - 1);
  g.periodic_t = periodic;
  return g;
}

ParamPatch::ParamPatch(ParamGrid grid, std::vector<Vec3> points)
    : grid_(grid), points_(std::move(points)) {
  if (grid_.ns < 5 || grid_.nt < 5)
    throw InvalidInput("ParamPatch: at least 5 points per axis are required");
  if (!(grid_.ds > 0) || !(grid_.dt > 0))
    throw InvalidInput("ParamPatch: grid spacings must be positive");
  if (points_.size() != grid_.size())
    throw InvalidInput("ParamPatch: point count does not match the grid");
  for (const auto& p : points_)
    if (!p.allFinite()) throw InvalidInput("ParamPatch: non-finite point");
  for (int i = 1; i < grid_.ns - 1; ++i) {
    for (int j = 0; j < grid_.nt; ++j) {
      if (!interior(grid_, i, j)) continue;
      const Vec3 Xs = at(i + 1, j) - at(i - 1, j);
      const Vec3 Xt = at(i, j + 1) - at(i, j - 1);
      if (!(Xs.cross(Xt).norm() > 0.0))
        throw DegenerateMetric("ParamPatch: degenerate tangents at node (" + std::to_string(i) +
                               ", " + std::to_string(j) + ")");
    }
  }
}

ParamPatch ParamPatch::sample(const ParamGrid& grid,
                              const std::function<Vec3(double, double)>& map) {
  std::vector<Vec3> pts(grid.size());
  for (int i = 0; i < grid.ns; ++i)
    for (int j = 0; j < grid.nt; ++j) pts[grid.index(i, j)] = map(grid.s(i), grid.t(j));
  return ParamPatch(grid, std::move(pts));
}

std::vector<std::size_t> ParamPatch::boundary_indices() const {
  std::vector<std::size_t> out;
  for (int j = 0; j < grid_.nt; ++j) out.push_back(grid_.index(0, j));
  for (int j = 0; j < grid_.nt; ++j) out.push_back(grid_.index(grid_.ns - 1, j));
  if (!grid_.periodic_t) {
    for (int i = 1; i < grid_.ns - 1; ++i) out.push_back(grid_.index(i, 0));
    for (int i = 1; i < grid_.ns - 1; ++i) out.push_back(grid_.index(i, grid_.nt - 1));
  }
  return out;
}

double CurvatureField::max_abs_H() const {
  double m = 0.0;
  for (const auto& c : nodes)
    if (c.valid) m = std::max(m, std::abs(c.H));
  return m;
}

double CurvatureField::max_A2() const {
  double m = 0.0;
  for (const auto& c : nodes)
    if (c.valid) m = std::max(m, c.A2);
  return m;
}

FormField fundamental_forms(const ParamPatch& patch) {
  const auto& g = patch.grid();
  FormField out{g, std::vector<FundamentalForms>(g.size())};

  // Unit normals from centered tangents; the forms need them on both neighbours.
  std::vector<Vec3> normal(g.size(), Vec3::Zero());
  std::atomic<bool> degenerate{false};
  parallel_for(0, static_cast<std::size_t>(g.ns), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    for (int j = 0; j < g.nt; ++j) {
      if (!interior(g, i, j)) continue;
      const Jet d = jet(patch, i, j);
      const Vec3 n = d.Xs.cross(d.Xt);
      if (!(n.norm() > 0.0)) {
        degenerate = true;
        continue;
      }
      normal[g.index(i, j)] = n.normalized();
    }
  });
  if (degenerate) throw DegenerateMetric("fundamental_forms: degenerate tangents");

  parallel_for(0, static_cast<std::size_t>(g.ns), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    for (int j = 0; j < g.nt; ++j) {
      if (g.ring(i, j) < 2) continue;
      const Jet d = jet(patch, i, j);
      FundamentalForms& ff = out.nodes[g.index(i, j)];
      ff.E = d.Xs.dot(d.Xs);
      ff.F = d.Xs.dot(d.Xt);
      ff.G = d.Xt.dot(d.Xt);
      const double det = ff.E * ff.G - ff.F * ff.F;
      if (!(det > 0.0)) {
        degenerate = true;
        continue;
      }
      ff.normal = d.Xs.cross(d.Xt).normalized();
      const Vec3 Ns = (normal[g.index(i + 1, j)] - normal[g.index(i - 1, j)]) / (2.0 * g.ds);
      const Vec3 Nt = (normal[g.index(i, j + 1)] - normal[g.index(i, j - 1)]) / (2.0 * g.dt);
      ff.e = d.Xs.dot(Ns);
      ff.f = 0.5 * (d.Xs.dot(Nt) + d.Xt.dot(Ns));
      ff.g = d.Xt.dot(Nt);
      ff.valid = true;
    }
  });
  if (degenerate) throw DegenerateMetric("fundamental_forms: EG - F^2 <= 0 at an interior node");
  return out;
}

CurvatureField curvature_scalars(const FormField& forms) {
  CurvatureField out{forms.grid, std::vector<Curvatures>(forms.nodes.size())};
  for (std::size_t k = 0; k < forms.nodes.size(); ++k) {
    const auto& f = forms.nodes[k];
    if (!f.valid) continue;
    const double det = f.E * f.G - f.F * f.F;
    Curvatures c;
    c.H = (f.e * f.G - 2.0 * f.f * f.F + f.g * f.E) / det;
    c.K = (f.e * f.g - f.f * f.f) / det;
    const double half = 0.5 * c.H;
    const double disc = std::sqrt(std::max(half * half - c.K, 0.0));
    c.k1 = half - disc;
    c.k2 = half + disc;
    c.A2 = c.k1 * c.k1 + c.k2 * c.k2;
    c.valid = true;
    out.nodes[k] = c;
  }
  return out;
}

CurvatureField curvatures(const ParamPatch& patch) {
  return curvature_scalars(fundamental_forms(patch));
}

std::vector<double> surface_laplacian(std::span<const double> field, const ParamPatch& patch) {
  const auto& g = patch.grid();
  if (field.size() != g.size()) throw InvalidInput("surface_laplacian: field size mismatch");
  std::vector<double> out(g.size(), kNaN);

  auto fv = [&](int i, int j) { return field[g.index(i, j)]; };

  // Flux through the half node (i + 1/2, j).
  auto flux_s = [&](int i, int j) {
    const Vec3 Xs = (patch.at(i + 1, j) - patch.at(i, j)) / g.ds;
    const Vec3 Xt = (patch.at(i, j + 1) - patch.at(i, j - 1) + patch.at(i + 1, j + 1) -
                     patch.at(i + 1, j - 1)) /
                    (4.0 * g.dt);
    const double fs = (fv(i + 1, j) - fv(i, j)) / g.ds;
    const double ft = (fv(i, j + 1) - fv(i, j - 1) + fv(i + 1, j + 1) - fv(i + 1, j - 1)) /
                      (4.0 * g.dt);
    const Metric m = metric(Xs, Xt);
    return m.sqrt_det * (m.inv_ss * fs + m.inv_st * ft);
  };
  // Flux through the half node (i, j + 1/2).
  auto flux_t = [&](int i, int j) {
    const Vec3 Xt = (patch.at(i, j + 1) - patch.at(i, j)) / g.dt;
    const Vec3 Xs = (patch.at(i + 1, j) - patch.at(i - 1, j) + patch.at(i + 1, j + 1) -
                     patch.at(i - 1, j + 1)) /
                    (4.0 * g.ds);
    const double ft = (fv(i, j + 1) - fv(i, j)) / g.dt;
    const double fs = (fv(i + 1, j) - fv(i - 1, j) + fv(i + 1, j + 1) - fv(i - 1, j + 1)) /
                      (4.0 * g.ds);
    const Metric m = metric(Xs, Xt);
    return m.sqrt_det * (m.inv_st * fs + m.inv_tt * ft);
  };

  std::atomic<bool> degenerate{false};
  parallel_for(0, static_cast<std::size_t>(g.ns), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    for (int j = 0; j < g.nt; ++j) {
      if (!interior(g, i, j)) continue;
      bool finite = true;
      for (int a = -1; a <= 1 && finite; ++a)
        for (int b = -1; b <= 1 && finite; ++b) finite = std::isfinite(fv(i + a, j + b));
      if (!finite) continue;
      const Jet d = jet(patch, i, j);
      const Metric m = metric(d.Xs, d.Xt);
      if (!(m.det > 0.0)) {
        degenerate = true;
        continue;
      }
      const double div = (flux_s(i, j) - flux_s(i - 1, j)) / g.ds +
                         (flux_t(i, j) - flux_t(i, j - 1)) / g.dt;
      out[g.index(i, j)] = div / m.sqrt_det;
    }
  });
  if (degenerate) throw DegenerateMetric("surface_laplacian: EG - F^2 <= 0 at an interior node");
  return out;
}

void for_each_cell(const ParamPatch& patch,
                   const std::function<void(const Vec3&, double, int, int)>& fn) {
  const auto& g = patch.grid();
  for (int i = 0; i < g.ns - 1; ++i) {
    for (int j = 0; j < g.cells_t(); ++j) {
      const Vec3& p00 = patch.at(i, j);
      const Vec3& p10 = patch.at(i + 1, j);
      const Vec3& p01 = patch.at(i, j + 1);
      const Vec3& p11 = patch.at(i + 1, j + 1);
      const Vec3 Xs = ((p10 + p11) - (p00 + p01)) / (2.0 * g.ds);
      const Vec3 Xt = ((p01 + p11) - (p00 + p10)) / (2.0 * g.dt);
      const double area = Xs.cross(Xt).norm() * g.ds * g.dt;
      fn(0.25 * (p00 + p10 + p01 + p11), area, i, j);
    }
  }
}

double patch_area(const ParamPatch& patch, const Region& region) {
  quad::CompensatedSum acc;
  for_each_cell(patch, [&](const Vec3& mid, double area, int, int) {
    if (!region || region(mid)) acc.add(area);
  });
  return acc.value();
}

double integrate(const ParamPatch& patch, const std::function<double(const Vec3&)>& fn,
                 const Region& region) {
  quad::CompensatedSum acc;
  for_each_cell(patch, [&](const Vec3& mid, double area, int, int) {
    if (!region || region(mid)) acc.add(fn(mid) * area);
  });
  return acc.value();
}

FirstVariation first_variation(const ParamPatch& patch, std::span<const double> phi, double h) {
  const auto& g = patch.grid();
  if (phi.size() != g.size()) throw InvalidInput("first_variation: phi size mismatch");
  if (!(h > 0)) throw InvalidInput("first_variation: step must be positive");
  for (int i = 0; i < g.ns; ++i)
    for (int j = 0; j < g.nt; ++j)
      if (g.ring(i, j) < 2 && phi[g.index(i, j)] != 0.0)
        throw InvalidInput("first_variation: phi must vanish on the two outermost rings");

  const FormField forms = fundamental_forms(patch);
  const CurvatureField curv = curvature_scalars(forms);

  auto offset = [&](double step) {
    std::vector<Vec3> pts = patch.points();
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (phi[k] != 0.0) pts[k] += step * phi[k] * forms.nodes[k].normal;
    try {
      ParamPatch moved(g, std::move(pts));
      for (int i = 0; i < g.ns; ++i)
        for (int j = 0; j < g.nt; ++j) {
          if (g.ring(i, j) < 1) continue;
          const Jet d = jet(moved, i, j);
          const Jet d0 = jet(patch, i, j);
          if (!(d.Xs.cross(d.Xt).dot(d0.Xs.cross(d0.Xt)) > 0.0))
            throw StepTooLarge("first_variation: offset patch folds over");
        }
      double area = 0.0;
      bool collapsed = false;
      quad::CompensatedSum acc;
      for_each_cell(moved, [&](const Vec3&, double a, int, int) {
        if (!(a > 0.0)) collapsed = true;
        acc.add(a);
      });
      if (collapsed) throw StepTooLarge("first_variation: offset patch has a collapsed cell");
      area = acc.value();
      return area;
    } catch (const DegenerateMetric&) {
      throw StepTooLarge("first_variation: offset patch is not immersed");
    }
  };

  FirstVariation fv;
  fv.numeric_derivative = (offset(h) - offset(-h)) / (2.0 * h);
  // Same cells as the area, with phi H averaged over the corners.
  auto phiH = [&](int i, int j) {
    const std::size_t k = g.index(i, j);
    return phi[k] == 0.0 ? 0.0 : phi[k] * curv.nodes[k].H;
  };
  quad::CompensatedSum flux;
  for_each_cell(patch, [&](const Vec3&, double a, int i, int j) {
    flux.add(0.25 * (phiH(i, j) + phiH(i + 1, j) + phiH(i, j + 1) + phiH(i + 1, j + 1)) * a);
  });
  fv.flux_integral = flux.value();
  return fv;
}

double convex_hull_check(const ParamPatch& patch) {
  const auto& g = patch.grid();
  std::vector<Vec3> boundary;
  for (std::size_t k : patch.boundary_indices()) boundary.push_back(patch.points()[k]);
  const hull::ConvexHull ch(boundary);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.ns; ++i)
    for (int j = 0; j < g.nt; ++j)
      if (!g.is_boundary(i, j)) worst = std::max(worst, ch.violation(patch.at(i, j)));
  return worst;
}

SimonsReport simons_residual(const ParamPatch& patch, double h_tol) {
  const auto& g = patch.grid();
  const FormField forms = fundamental_forms(patch);
  const CurvatureField curv = curvature_scalars(forms);
  SimonsReport rep;
  rep.max_abs_H = curv.max_abs_H();
  if (rep.max_abs_H > h_tol)
    throw NotMinimal("simons_residual: max |H| = " + std::to_string(rep.max_abs_H) +
                     " exceeds the minimality tolerance");

  std::vector<double> a2(g.size(), kNaN);
  for (std::size_t k = 0; k < a2.size(); ++k)
    if (curv.nodes[k].valid) a2[k] = curv.nodes[k].A2;
  const std::vector<double> lap = surface_laplacian(a2, patch);

  // h_ab in coordinates, index 0 = s, 1 = t.
  auto hcomp = [&](int i, int j, int a, int b) {
    const auto& f = forms.nodes[g.index(i, j)];
    if (a == 0 && b == 0) return f.e;
    if (a == 1 && b == 1) return f.g;
    return f.f;
  };

  std::vector<double> residual(g.size(), kNaN), inequality(g.size(), kNaN);
  parallel_for(0, static_cast<std::size_t>(g.ns), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    for (int j = 0; j < g.nt; ++j) {
      const std::size_t k = g.index(i, j);
      if (g.ring(i, j) < 2 || !std::isfinite(lap[k])) continue;
      const Jet d = jet(patch, i, j);
      const Vec3 X[2] = {d.Xs, d.Xt};
      const Vec3 XX[2][2] = {{d.Xss, d.Xst}, {d.Xst, d.Xtt}};
      const Metric m = metric(d.Xs, d.Xt);
      const double ginv[2][2] = {{m.inv_ss, m.inv_st}, {m.inv_st, m.inv_tt}};
      double gamma[2][2][2];  // gamma[c][a][b]
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double low0 = XX[a][b].dot(X[0]);
          const double low1 = XX[a][b].dot(X[1]);
          for (int c = 0; c < 2; ++c) gamma[c][a][b] = ginv[c][0] * low0 + ginv[c][1] * low1;
        }
      double dh[2][2][2];  // partial_a h_bc
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          dh[0][b][c] = (hcomp(i + 1, j, b, c) - hcomp(i - 1, j, b, c)) / (2.0 * g.ds);
          dh[1][b][c] = (hcomp(i, j + 1, b, c) - hcomp(i, j - 1, b, c)) / (2.0 * g.dt);
        }
      double cov[2][2][2];  // nabla_a h_bc
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c) {
            double v = dh[a][b][c];
            for (int e = 0; e < 2; ++e)
              v -= gamma[e][a][b] * hcomp(i, j, e, c) + gamma[e][a][c] * hcomp(i, j, b, e);
            cov[a][b][c] = v;
          }
      // Raise all three indices and contract.
      double norm2 = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c) {
            double raised = 0.0;
            for (int p = 0; p < 2; ++p)
              for (int q = 0; q < 2; ++q)
                for (int r = 0; r < 2; ++r)
                  raised += ginv[a][p] * ginv[b][q] * ginv[c][r] * cov[p][q][r];
            norm2 += raised * cov[a][b][c];
          }
      const double A2 = a2[k];
      residual[k] = lap[k] + 2.0 * A2 * A2 - 2.0 * norm2;
      inequality[k] = lap[k] + 2.0 * A2 * A2;
    }
  });

  rep.min_inequality = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < residual.size(); ++k) {
    if (!std::isfinite(residual[k])) continue;
    rep.max_residual = std::max(rep.max_residual, std::abs(residual[k]));
    rep.min_inequality = std::min(rep.min_inequality, inequality[k]);
    ++rep.nodes;
  }
  if (rep.nodes == 0) throw InvalidInput("simons_residual: patch too small for the stencil");
  return rep;
}

double conformality_defect(const ParamPatch& patch) {
  const auto& g = patch.grid();
  double worst = 0.0;
  for (int i = 1; i < g.ns - 1; ++i)
    for (int j = 0; j < g.nt; ++j) {
      if (!interior(g, i, j)) continue;
      const Vec3 Xs = (patch.at(i + 1, j) - patch.at(i - 1, j)) / (2.0 * g.ds);
      const Vec3 Xt = (patch.at(i, j + 1) - patch.at(i, j - 1)) / (2.0 * g.dt);
      worst = std::max({worst, std::abs(Xs.norm() - Xt.norm()), std::abs(Xs.dot(Xt))});
    }
  return worst;
}

}  // namespace minsurf::geom
