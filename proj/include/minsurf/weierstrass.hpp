#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "minsurf/geomcore.hpp"

namespace minsurf::weierstrass {

using Holo = std::function<Complex(Complex)>;

/// Parameter domain. Annulus grids use (s, t) = (log|z|, arg z) with t
/// periodic; rectangle grids use z = t + i s.
struct Domain {
  enum class Kind { Annulus, Rectangle };
  Kind kind = Kind::Rectangle;
  double r_in = 0, r_out = 0;            // annulus
  double re0 = 0, re1 = 0, im0 = 0, im1 = 0;  // rectangle

  static Domain annulus(double r_in, double r_out);
  static Domain rectangle(double re0, double re1, double im0, double im1);
  bool contains(Complex z, double tol = 1e-12) const;
};

/// Holomorphic data: Gauss map g and one-form density phi (form phi(z) dz).
struct Data {
  std::string name;
  Domain domain;
  Holo g;
  Holo phi;
  Complex z0{1.0, 0.0};
};

struct QuadOptions {
  int order = 8;                   // Gauss–Legendre points per sub-segment
  double segments_per_unit = 8.0;  // sub-segments per unit arclength
};

/// catenoid, helicoid or enneper. Throws UnknownPreset.
Data preset_data(const std::string& name);

/// Data from a JSON descriptor built on the function vocabulary
/// poly / monomial / exp / recip / sum / product.
Data data_from_json(const std::string& text);

/// The three component forms (1/2 (1/g - g), i/2 (1/g + g), 1) phi at z.
/// Throws SingularityOnPath outside the guard |g| in [1e-8, 1e8], |phi| <= 1e8.
std::array<Complex, 3> integrand(const Data& data, Complex z);

/// Complex line integral of the component forms along a polyline.
std::array<Complex, 3> path_integral(const Data& data, std::span<const Complex> path,
                                     const QuadOptions& opts = {}, bool check_domain = true);

/// Re of the integral from path.front() (which must equal z0) to path.back().
Vec3 integrate_immersion(const Data& data, std::span<const Complex> path,
                         const QuadOptions& opts = {});

/// Straight segment from z0 to z.
Vec3 integrate_immersion(const Data& data, Complex z, const QuadOptions& opts = {});

/// Max over loops of |Re of the loop integral|. Loops are closed implicitly.
double period_defect(const Data& data, const std::vector<std::vector<Complex>>& loops,
                     const QuadOptions& opts = {});

/// Polygon with n vertices on |z - center| = radius, counter-clockwise.
std::vector<Complex> circle_loop(double radius, int n, Complex center = {0.0, 0.0});

struct GridSpec {
  int ns = 128;
  int nt = 128;
};

/// Evaluates the immersion on the full parameter grid of the domain. The
/// integral is accumulated edge by edge: along the first t-column in s, then
/// along every row in t, so all nodes share their path prefixes.
geom::ParamPatch make_patch(const Data& data, const GridSpec& spec, const QuadOptions& opts = {});

/// Max distance between corresponding points after the least-squares rigid
/// alignment (centroid plus orthogonal Procrustes) of `a` onto `b`.
double rigid_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

}  // namespace minsurf::weierstrass
