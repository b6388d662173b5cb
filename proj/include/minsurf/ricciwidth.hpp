#pragma once

namespace minsurf::ricci {

/// Lower bound for the scalar curvature at time t: 1 / (1/minR0 - 2t/n) when
/// minR0 < 0, otherwise -n / (2t) (minus infinity at t = 0).
double scalar_lower_bound(double minR0, int n, double t);

/// RK4 on R' = (2/n) R^2 from R(0) = minR0.
double scalar_comparison_rk4(double minR0, int n, double t, int steps = 1000);

struct WidthState {
  double t = 0;
  double W = 0;
  double C = 1;
};

/// Equality case of dW/dt = -4 pi + 3 W / (4 (t + C)), clamped at 0.
double width_trajectory(double W0, double C, double t);

/// RK4 on the same ODE (no clamping) with steps eta (t + C), cross-check only.
double width_rk4(double W0, double C, double t, double eta = 1e-3);

/// Zero of width_trajectory: (C^{1/4} + W0 / (16 pi C^{3/4}))^4 - C.
double extinction_bound(double W0, double C);

/// Bisection on width_trajectory for its first zero.
double extinction_bisection(double W0, double C, double tol = 1e-12);

/// -4 pi - (area / 2) minR.
double minimal_sphere_area_derivative(double area, double minR);

}  // namespace minsurf::ricci
