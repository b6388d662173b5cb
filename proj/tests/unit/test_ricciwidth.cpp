#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>

#include "minsurf/ricciwidth.hpp"

using namespace minsurf;
using namespace minsurf::ricci;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kUnitW0 = 16 * kPi * (std::pow(2.0, 0.25) - 1);
}  // namespace

TEST_CASE("scalar curvature lower bound") {
  CHECK(scalar_lower_bound(-3, 3, 0) == -3.0);
  CHECK(scalar_lower_bound(-3, 3, 1) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(scalar_comparison_rk4(-3, 3, 1) == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(scalar_lower_bound(5, 3, 2) == -0.75);
  CHECK(scalar_lower_bound(5, 3, 0) == -std::numeric_limits<double>::infinity());
  for (double R0 : {-10.0, -1.0, -0.01})
    for (int n : {2, 3, 4}) {
      double prev = -std::numeric_limits<double>::infinity();
      for (int k = 0; k <= 50; ++k) {
        const double t = 0.1 * k;
        const double v = scalar_lower_bound(R0, n, t);
        CHECK(v >= prev);
        CHECK(v < 0);
        // Equals -n / (2 (t + C)) with C = n / (-2 R0).
        CHECK(v == doctest::Approx(-n / (2 * (t + n / (-2 * R0)))).epsilon(1e-13));
        prev = v;
      }
    }
}

TEST_CASE("width trajectory") {
  CHECK(width_trajectory(0, 1, 0) == 0.0);
  CHECK(width_trajectory(kUnitW0, 1, 1) == 0.0);
  CHECK(width_trajectory(kUnitW0, 1, 0.999) > 0.0);
  CHECK(width_trajectory(kUnitW0, 1, 5) == 0.0);
  CHECK(std::abs(width_trajectory(100, 1, 0.1) - width_rk4(100, 1, 0.1)) <= 1e-8);
  CHECK(width_trajectory(7, 2, 0) == doctest::Approx(7).epsilon(1e-15));
}

TEST_CASE("property: closed form vs RK4 on a lattice") {
  double worst = 0;
  for (double W0 : {0.5, 5.0, 50.0, 500.0})
    for (double C : {0.1, 1.0, 10.0}) {
      const double T = extinction_bound(W0, C);
      for (double frac : {0.0, 0.1, 0.5, 0.9}) {
        const double w = width_trajectory(W0, C, frac * T);
        worst = std::max(worst, std::abs(w - width_rk4(W0, C, frac * T)) / std::max(1.0, w));
      }
    }
  CHECK(worst <= 1e-8);
}

TEST_CASE("property: W decreases while W < 16 pi (t + C) / 3") {
  for (double W0 : {1.0, 30.0, 300.0})
    for (double C : {0.5, 2.0}) {
      const double T = extinction_bound(W0, C);
      double prev = width_trajectory(W0, C, 0);
      for (int k = 1; k <= 200; ++k) {
        const double t_prev = T * (k - 1) / 200;
        const double w = width_trajectory(W0, C, T * k / 200);
        if (prev < 16 * kPi / 3 * (t_prev + C) && prev > 0) CHECK(w < prev);
        CHECK(w >= 0);
        prev = w;
      }
    }
}

TEST_CASE("extinction time") {
  CHECK(extinction_bound(0, 1) == 0.0);
  CHECK(extinction_bound(kUnitW0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(extinction_bound(20, 1) > extinction_bound(10, 1));
  for (double W0 : {0.1, 10.0, 1000.0})
    for (double C : {0.01, 1.0, 100.0}) {
      const double T = extinction_bound(W0, C);
      CHECK(std::abs(extinction_bisection(W0, C) - T) <= 1e-10 * std::max(1.0, T));
      CHECK(width_trajectory(W0, C, 0.999 * T) > 0);
    }
}

TEST_CASE("area derivative of minimal spheres") {
  CHECK(minimal_sphere_area_derivative(7.3, 0) == doctest::Approx(-4 * kPi));
  CHECK(minimal_sphere_area_derivative(4 * kPi, 6) == doctest::Approx(-16 * kPi));
  CHECK(minimal_sphere_area_derivative(0, -12) == doctest::Approx(-4 * kPi));
}
