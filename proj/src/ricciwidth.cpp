#include "minsurf/ricciwidth.hpp"

#include <cmath>
#include <limits>

#include "minsurf/common.hpp"
#include "minsurf/errors.hpp"

namespace minsurf::ricci {

double scalar_lower_bound(double minR0, int n, double t) {
  if (n < 1 || !(t >= 0)) throw InvalidInput("scalar_lower_bound: need n >= 1, t >= 0");
  if (minR0 < 0) return 1.0 / (1.0 / minR0 - 2.0 * t / n);
  if (t == 0) return -std::numeric_limits<double>::infinity();
  return -n / (2.0 * t);
}

double scalar_comparison_rk4(double minR0, int n, double t, int steps) {
  auto f = [n](double R) { return 2.0 / n * R * R; };
  double R = minR0;
  const double h = t / steps;
  for (int k = 0; k < steps; ++k) {
    const double k1 = f(R), k2 = f(R + 0.5 * h * k1), k3 = f(R + 0.5 * h * k2), k4 = f(R + h * k3);
    R += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return R;
}

namespace {

void check(double W0, double C, double t) {
  if (!(W0 >= 0) || !(C > 0) || !(t >= 0)) throw InvalidInput("width: need W0 >= 0, C > 0, t >= 0");
}

}  // namespace

double width_trajectory(double W0, double C, double t) {
  check(W0, C, t);
  const double T = extinction_bound(W0, C);
  if (t >= T) return 0.0;
  const double s = t + C;
  const double W = std::pow(s, 0.75) *
                   (W0 * std::pow(C, -0.75) - 16 * kPi * (std::pow(s, 0.25) - std::pow(C, 0.25)));
  return W > 0 ? W : 0.0;
}

double width_rk4(double W0, double C, double t, double eta) {
  check(W0, C, t);
  if (!(eta > 0)) throw InvalidInput("width_rk4: eta must be positive");
  auto f = [C](double tt, double W) { return -4 * kPi + 3 * W / (4 * (tt + C)); };
  double W = W0, tt = 0;
  // Steps proportional to t + C, the scale on which the right side varies.
  while (tt < t) {
    const double h = std::min(t - tt, eta * (tt + C));
    const double k1 = f(tt, W), k2 = f(tt + h / 2, W + h / 2 * k1), k3 = f(tt + h / 2, W + h / 2 * k2),
                 k4 = f(tt + h, W + h * k3);
    W += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    tt += h;
  }
  return W;
}

double extinction_bound(double W0, double C) {
  check(W0, C, 0.0);
  if (W0 == 0) return 0.0;
  return std::pow(std::pow(C, 0.25) + W0 / (16 * kPi * std::pow(C, 0.75)), 4) - C;
}

double extinction_bisection(double W0, double C, double tol) {
  check(W0, C, 0.0);
  if (W0 == 0) return 0.0;
  // Unclamped closed form, positive before the root and negative after it.
  auto W = [&](double t) {
    const double s = t + C;
    return std::pow(s, 0.75) * (W0 * std::pow(C, -0.75) - 16 * kPi * (std::pow(s, 0.25) - std::pow(C, 0.25)));
  };
  double a = 0, b = 1;
  while (W(b) > 0) b *= 2;
  while (b - a > tol * std::max(1.0, b)) {
    const double m = 0.5 * (a + b);
    (W(m) > 0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

double minimal_sphere_area_derivative(double area, double minR) {
  if (!(area >= 0)) throw InvalidInput("minimal_sphere_area_derivative: area must be non-negative");
  return -4 * kPi - 0.5 * area * minR;
}

}  // namespace minsurf::ricci
