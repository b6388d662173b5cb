#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "minsurf/common.hpp"

namespace minsurf::multigraph {

/// S_{r1,r2}^{th1,th2} on the universal cover of the punctured plane.
struct Sector {
  double r1 = 1, r2 = 2;
  double th1 = 0, th2 = kTwoPi;

  void validate() const;
};

/// Log-uniform radii rho_i = exp(s0 + i ds), angles th0 + j dth.
struct PolarGrid {
  double s0 = 0, ds = 1;
  int nr = 0;
  double th0 = 0, dth = 1;
  int nth = 0;

  double s(int i) const { return s0 + i * ds; }
  double rho(int i) const;
  double theta(int j) const { return th0 + j * dth; }
  std::size_t size() const { return static_cast<std::size_t>(nr) * nth; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * nth + j; }

  /// Node index with s(i) (resp. theta(j)) equal to the argument; throws
  /// GridMisaligned when no node lies within 1e-9 of a spacing.
  int radial_node(double rho) const;
  int angular_node(double theta) const;

  /// nr radial nodes over [sector.r1, sector.r2]; dth = 2 pi / per_turn and
  /// the angular width must be a multiple of it.
  static PolarGrid over(const Sector& sector, int nr, int per_turn);
};

struct PolarField {
  PolarGrid grid;
  std::vector<double> v;
  double at(int i, int j) const { return v[grid.index(i, j)]; }
};

struct MultiGraph {
  Sector sector;
  PolarGrid grid;
  std::vector<double> u;

  double at(int i, int j) const { return u[grid.index(i, j)]; }
  static MultiGraph sample(const Sector& sector, int nr, int per_turn,
                           const std::function<double(double, double)>& u);
};

struct ModelParams {
  double a = 0, b = 0, c = 0;
  double r = 1;             // scale of the standard piece
  double shift = 0;         // slab: arctan(theta / (log rho + shift))
  double perturbation = 0;  // adds perturbation * rho^{-1/2} sin(theta)
};

/// helicoid (c theta / 2pi), catenoid_log (b log rho), slab_arctan, standard.
/// Throws BadSector where the model is undefined (slab needs
/// log rho + shift >= 1) and UnknownPreset for other names.
MultiGraph build_model(const std::string& name, const ModelParams& params, const Sector& sector,
                       int nr, int per_turn);

/// w(rho, theta) = u(rho, theta + 2 pi) - u(rho, theta) on the sector shrunk
/// by 2 pi. Throws GridMisaligned unless 2 pi is a multiple of dth.
PolarField separation(const MultiGraph& g);

/// +1 or -1 when w has one strict sign, 0 otherwise.
int sign_of(const PolarField& w);

/// |w|(r2, 0) - |w|(r1, 0) (r2 / r1)^alpha, linear interpolation in log rho
/// at theta = 0. Throws SignChange.
double sublinear_defect(const PolarField& w, double alpha, double r1, double r2);

struct LogGradient {
  double value = 0;  // rho |grad log |w|| at the node nearest (rho, theta)
  bool within = false;  // value <= alpha
};

LogGradient log_separation_gradient(const PolarField& w, double rho, double theta, double alpha);

struct ResidualNorms {
  double g1 = 0;  // outer circle
  double g2 = 0;  // slit
  double g3 = 0;  // inner circle and Laplacian terms
  double representation = 0;  // |f - (K / zeta + g1 + g2 + g3)|
};

struct Decomposition {
  double b = 0, c = 0;
  Complex K;  // f = K / zeta + g with K = b - i c / (2 pi)
  std::array<double, 3> sector_b{}, sector_c{};  // alpha = 0, -pi/2, pi/2
  double cross_sector_spread = 0;
  PolarField residual;  // |g| on S_{2 r1, sqrt(R)/2}^{0, 2 pi}
  double residual_sup = 0;
  ResidualNorms norms;  // sup over a subsampled set of zeta
};

/// Cauchy-integral extraction of the catenoid and helicoid coefficients from
/// f = u_x - i u_y. Needs the sector to contain S_{1, sqrt R}^{-pi, 3 pi},
/// r1 >= 1 and 2 r1 <= sqrt(R) / 2 (SectorTooSmall); non-finite samples raise
/// NonFiniteSamples.
Decomposition cauchy_decompose(const MultiGraph& g, double r1, double R);

struct StandardPiece {
  double a = 0, b = 0, c = 0, r = 1;
  double value(double rho, double theta) const;
};

struct Fit {
  StandardPiece piece;
  double misfit = 0;  // sup |u - v| over S_{r1, mu r1}^{0, 2 pi}
  Decomposition decomposition;
};

/// b, c from cauchy_decompose; a is the mean of u - b log(rho / r1) -
/// c theta / 2pi over the target sector.
Fit fit_standard_piece(const MultiGraph& g, double r1, double mu, double R);

struct WantitDiagnostic {
  double epsilon = 0;  // sup of |du| + rho|Hess u| + 4 rho|dw|/|w| + rho^2|Hess w|/|w|
  int separation_sign = 0;
};

/// Measured over S_{r1, r2}^{0, 2 pi} where every stencil is available.
WantitDiagnostic wantit_diagnostic(const MultiGraph& g, double r1, double r2);

}  // namespace minsurf::multigraph
