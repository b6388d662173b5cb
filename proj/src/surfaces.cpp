#include "minsurf/surfaces.hpp"

#include <cmath>

#include "minsurf/errors.hpp"

namespace minsurf::surfaces {

using geom::ParamGrid;
using geom::ParamPatch;

ParamPatch plane(double s0, double s1, double t0, double t1, int ns, int nt) {
  return ParamPatch::sample(ParamGrid::span(s0, s1, ns, t0, t1, nt),
                            [](double s, double t) { return Vec3(s, t, 0.0); });
}

ParamPatch cylinder(double R, double s0, double s1, double t0, double t1, int ns, int nt) {
  return ParamPatch::sample(ParamGrid::span(s0, s1, ns, t0, t1, nt), [R](double s, double t) {
    return Vec3(R * std::cos(s), R * std::sin(s), t);
  });
}

ParamPatch sphere(double R, double s0, double s1, int ns, int nt, const Vec3& center) {
  if (!(s0 >= 0.0 && s1 <= kPi && s0 < s1)) throw InvalidInput("sphere: polar range outside [0, pi]");
  return ParamPatch::sample(ParamGrid::span(s0, s1, ns, 0.0, kTwoPi, nt, true),
                            [R, center](double s, double t) {
                              return Vec3(center + R * Vec3(std::sin(s) * std::cos(t),
                                                            std::sin(s) * std::sin(t),
                                                            std::cos(s)));
                            });
}

ParamPatch helicoid(double s0, double s1, double t0, double t1, int ns, int nt, bool periodic_t) {
  return ParamPatch::sample(ParamGrid::span(s0, s1, ns, t0, t1, nt, periodic_t),
                            [](double s, double t) {
                              return Vec3(s * std::cos(t), s * std::sin(t), t);
                            });
}

ParamPatch catenoid(double s0, double s1, int ns, int nt) {
  return ParamPatch::sample(ParamGrid::span(s0, s1, ns, 0.0, kTwoPi, nt, true),
                            [](double s, double t) {
                              return Vec3(std::cosh(s) * std::cos(t), std::cosh(s) * std::sin(t), s);
                            });
}

ParamPatch flat_disk(double R, int ns, int nt) {
  return ParamPatch::sample(ParamGrid::span(0.0, R, ns, 0.0, kTwoPi, nt, true),
                            [](double r, double t) {
                              return Vec3(r * std::cos(t), r * std::sin(t), 0.0);
                            });
}

ParamPatch graph_lift(double x0, double dx, int nx, double y0, double dy, int ny,
                      const std::vector<double>& u) {
  ParamGrid g;
  g.ns = nx;
  g.nt = ny;
  g.s0 = x0;
  g.ds = dx;
  g.t0 = y0;
  g.dt = dy;
  if (u.size() != g.size()) throw InvalidInput("graph_lift: sample count mismatch");
  std::vector<Vec3> pts(g.size());
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) pts[g.index(i, j)] = Vec3(g.s(i), g.t(j), u[g.index(i, j)]);
  return ParamPatch(g, std::move(pts));
}

}  // namespace minsurf::surfaces
