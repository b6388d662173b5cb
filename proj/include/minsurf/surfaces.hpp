#pragma once

#include "minsurf/geomcore.hpp"

namespace minsurf::surfaces {

// Exact parametrizations used as references throughout the test suite.

/// (s, t) -> (s, t, 0) on [s0, s1] x [t0, t1].
geom::ParamPatch plane(double s0, double s1, double t0, double t1, int ns, int nt);

/// (s, t) -> (R cos s, R sin s, t); normal points outward so H = 1/R.
geom::ParamPatch cylinder(double R, double s0, double s1, double t0, double t1, int ns, int nt);

/// Polar angle s in [s0, s1], azimuth t periodic; outward normal, H = 2/R.
geom::ParamPatch sphere(double R, double s0, double s1, int ns, int nt,
                        const Vec3& center = Vec3::Zero());

/// (s, t) -> (s cos t, s sin t, t).
geom::ParamPatch helicoid(double s0, double s1, double t0, double t1, int ns, int nt,
                          bool periodic_t = false);

/// (s, t) -> (cosh s cos t, cosh s sin t, s), t periodic.
geom::ParamPatch catenoid(double s0, double s1, int ns, int nt);

/// Flat disk of radius R in polar form (r cos t, r sin t, 0), t periodic.
geom::ParamPatch flat_disk(double R, int ns, int nt);

/// Lift of a graph u over the rectangle grid: (x, y) -> (x, y, u).
geom::ParamPatch graph_lift(double x0, double dx, int nx, double y0, double dy, int ny,
                            const std::vector<double>& u);

}  // namespace minsurf::surfaces
