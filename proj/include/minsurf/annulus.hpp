#pragma once

#include <functional>
#include <string>
#include <vector>

#include "minsurf/common.hpp"

namespace minsurf::annulus {

/// Complex samples on delta <= |z| <= R: log-uniform radii, nth angular
/// cells per turn, columns j = 0..nth with theta_j = 2 pi j / nth. Without
/// `slit` the column j = nth repeats j = 0.
struct AnnulusFunction {
  double delta = 0.1, R = 1;
  int nr = 0, nth = 0;
  bool slit = false;
  std::vector<Complex> f;  // nr x (nth + 1)

  double ds() const;
  double dth() const { return kTwoPi / nth; }
  double rho(int i) const;
  double theta(int j) const { return dth() * j; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * (nth + 1) + j; }
  Complex at(int i, int j) const { return f[index(i, j)]; }

  /// fn(rho, theta); theta runs over [0, 2 pi] for slit data.
  static AnnulusFunction sample(double delta, double R, int nr, int nth,
                                const std::function<Complex(double, double)>& fn, bool slit = false);
  void validate() const;
};

/// Built-in test functions: const, inv (alpha / z), z, z2, zplus3,
/// harmonic_log (eps log r / 4 pi), helicoid_gradient (-i c / (2 pi z)) and,
/// for slit data, slit_power (k z^{-(1 - eps)} with the slit mismatch
/// 2 pi eps (delta / rho)^{1 - eps}).
std::function<Complex(double, double)> preset_function(const std::string& name, double param,
                                                       double delta);

struct Average {
  Complex value;
  double radius = 0;  // grid circle actually used
};

/// Mean over the grid circle nearest to s. Throws OutOfRange.
Average circular_average(const AnnulusFunction& f, double s);

/// max_i |I(rho_i) - I(delta)|.
double average_drift(const AnnulusFunction& f);

/// d f / d theta on one circle: spectral for closed data, fourth-order
/// differences for slit data.
std::vector<Complex> angular_derivative(const AnnulusFunction& f, int i);

struct ChebyshevCenter {
  Complex center;
  double radius = 0;       // max |f - center| after refinement
  double at_average = 0;   // max |f - I(delta)|
};

/// Starts at I(delta) and runs 20 Badoiu-Clarkson steps, keeping the best.
ChebyshevCenter min_max_center(const AnnulusFunction& f);

struct OscillationReport {
  double eps_hat = 0;  // integral of |grad f| over both boundary circles
  ChebyshevCenter center;
  bool holds = false;  // center.radius <= eps_hat + tol
};

OscillationReport oscillation_check(const AnnulusFunction& f, double tol = 1e-12);

struct EnergyReport {
  double energy = 0;
  double bound = 0;            // 2 pi e^{2t} / R_param
  double boundary_grad2 = 0;   // max |grad f|^2 on the grid circle nearest sqrt(R_param)
  double boundary_radius = 0;
  double pointwise_bound = 0;  // 32 / R_param^2
};

/// E(t) over sqrt(R) e^{-t} <= |z| <= sqrt(R) e^{t}. Throws WindowOutOfRange.
EnergyReport annulus_energy(const AnnulusFunction& f, double R_param, double t);

struct SlitReport {
  double eps_a = 0;        // max(|f| + rho |grad f|)
  double eps_b = 0;        // smallest e with |f(2pi) - f(0)| <= 2 pi e (delta/rho)^{1-e}
  bool hypotheses_hold = false;
  std::string failing;     // the first violated inequality, empty when none
  double drift = 0;        // max |I(rho) - I(delta)|
  double drift_bound = 0;  // eps_b / (1 - eps_b)
  ChebyshevCenter center;
  double bound = 0;        // eps / (1 - eps) + 2 pi eps
  bool holds = false;
};

/// With `strict`, a violated hypothesis throws HypothesisViolated.
SlitReport slit_oscillation_check(const AnnulusFunction& f, double eps, bool strict = false,
                                  double tol = 1e-9);

}  // namespace minsurf::annulus
