#include <doctest.h>

#include <cmath>
#include <vector>

#include "minsurf/annulus.hpp"
#include "minsurf/errors.hpp"

using namespace minsurf;
using namespace minsurf::annulus;

namespace {

AnnulusFunction closed(const std::string& fn, double param, double delta = 0.1, double R = 10, int nr = 129,
                       int nth = 64) {
  return AnnulusFunction::sample(delta, R, nr, nth, preset_function(fn, param, delta));
}

}  // namespace

TEST_CASE("circular averages") {
  CHECK(std::abs(circular_average(closed("const", 2.5), 1.0).value - 2.5) < 1e-15);
  const auto inv = circular_average(closed("inv", 1.0), 2.0);
  CHECK(std::abs(inv.value) < 1e-14);
  CHECK(inv.radius == doctest::Approx(2.0).epsilon(0.05));
  for (double s : {0.1, 0.7, 3.0, 10.0}) CHECK(std::abs(circular_average(closed("zplus3", 0), s).value - 3.0) < 1e-13);
  CHECK_THROWS_AS(circular_average(closed("z", 1), 11), OutOfRange);
  CHECK_THROWS_AS(circular_average(closed("z", 1), 0.05), OutOfRange);
}

TEST_CASE("average drift") {
  CHECK(average_drift(closed("inv", 1.0)) <= 1e-10);
  CHECK(average_drift(closed("z2", 1.0)) <= 1e-10);
  CHECK(average_drift(closed("helicoid_gradient", 0.3)) <= 1e-10);
  // eps log r / 4 pi: drift = eps log(R/delta) / 4 pi, linear in the log ratio
  const double eps = 0.1;
  for (double R : {1.0, 10.0, 1e3}) {
    const double d = average_drift(closed("harmonic_log", eps, 0.1, R));
    CHECK(d == doctest::Approx(eps * std::log(R / 0.1) / (4 * kPi)).epsilon(1e-12));
  }
  // At the ratio e^{8 pi} the drift reaches 2 eps.
  const double big = average_drift(closed("harmonic_log", eps, 0.1, 0.1 * std::exp(8 * kPi) * 1.01));
  CHECK(big >= 2 * eps);
}

TEST_CASE("angular derivative is spectral on closed data") {
  const auto f = closed("z2", 1.0);
  for (int i : {0, 40, 128}) {
    const auto d = angular_derivative(f, i);
    for (int j = 0; j <= f.nth; ++j) {
      const Complex z = std::polar(f.rho(i), f.theta(j));
      CHECK(std::abs(d[j] - Complex(0, 2) * z * z) < 1e-10 * std::max(1.0, std::norm(z)));
    }
  }
}

TEST_CASE("oscillation bounds") {
  const auto c = oscillation_check(closed("const", 1.7));
  CHECK(c.eps_hat < 1e-10);
  CHECK(c.center.radius < 1e-14);
  CHECK(c.holds);

  const double alpha = 0.7;
  const auto r = oscillation_check(closed("inv", alpha));
  CHECK(r.eps_hat == doctest::Approx(kTwoPi * alpha * (1 / 0.1 + 1 / 10.0)).epsilon(1e-10));
  CHECK(r.center.at_average == doctest::Approx(alpha / 0.1).epsilon(1e-10));
  CHECK(r.holds);
  CHECK(r.center.at_average <= r.eps_hat);

  const auto z = oscillation_check(closed("z", 0.1, 0.1, 1.0));
  CHECK(z.eps_hat == doctest::Approx(kTwoPi * 1.1 / 10).epsilon(1e-10));
  CHECK(z.center.radius == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(z.holds);
}

TEST_CASE("property: reports are invariant under z -> lambda z") {
  auto f = [](Complex z) { return 0.3 / z + 0.2 * z + Complex(0, 0.1) * z * z; };
  const auto a = AnnulusFunction::sample(0.2, 2.0, 97, 64, [&](double r, double t) { return f(std::polar(r, t)); });
  for (double lambda : {0.5, 3.0}) {
    const auto b = AnnulusFunction::sample(0.2 / lambda, 2.0 / lambda, 97, 64,
                                           [&](double r, double t) { return f(lambda * std::polar(r, t)); });
    const auto ra = oscillation_check(a), rb = oscillation_check(b);
    CHECK(rb.eps_hat == doctest::Approx(ra.eps_hat).epsilon(1e-10));
    CHECK(rb.center.radius == doctest::Approx(ra.center.radius).epsilon(1e-10));
    CHECK(average_drift(b) == doctest::Approx(average_drift(a)).epsilon(1e-6));
  }
}

TEST_CASE("annulus energy") {
  const auto inv = closed("inv", 1.0, 0.1, 1000, 1025, 64);
  const double t = std::log(2.0);
  const auto e = annulus_energy(inv, 100, t);
  CHECK(e.energy == doctest::Approx(0.0375 * kPi).epsilon(1e-8));
  CHECK(e.energy <= e.bound);
  CHECK(e.bound == doctest::Approx(kTwoPi * 4 / 100).epsilon(1e-14));
  CHECK(e.boundary_grad2 == doctest::Approx(1e-4).epsilon(1e-6));
  CHECK(e.boundary_grad2 <= e.pointwise_bound);
  CHECK(annulus_energy(closed("const", 3.0, 0.1, 1000, 257, 64), 100, t).energy < 1e-20);
  CHECK_THROWS_AS(annulus_energy(inv, 100, 5.0), WindowOutOfRange);

  // 2 E(t) <= E'(t) for |grad f| <= 1/|z| data.
  const auto g = AnnulusFunction::sample(0.1, 1000, 1025, 64, [](double r, double th) {
    const Complex z = std::polar(r, th);
    return 0.5 / z + 0.2 / (z * z);
  });
  const double h = 1e-3;
  for (double tt : {0.3, 0.8, 1.5}) {
    const double E = annulus_energy(g, 100, tt).energy;
    const double dE = (annulus_energy(g, 100, tt + h).energy - annulus_energy(g, 100, tt - h).energy) / (2 * h);
    CHECK(2 * E <= dE + 1e-8);
  }
}

TEST_CASE("slit oscillation") {
  SUBCASE("single-valued data with small modulus") {
    const double eps = 0.05;
    const auto f = AnnulusFunction::sample(0.1, 1.0, 65, 64, preset_function("z", 0.02, 0.1), true);
    const auto r = slit_oscillation_check(f, eps);
    CHECK(r.hypotheses_hold);
    CHECK(r.eps_b < 1e-9);
    CHECK(r.center.radius <= kTwoPi * eps);
    CHECK(r.holds);
  }
  SUBCASE("helicoid-sheet gradient") {
    const double c = 0.01, delta = 0.1;
    const auto f = AnnulusFunction::sample(delta, 1.0, 65, 64, preset_function("helicoid_gradient", c, delta), true);
    const double eps = 1.2 * c / (kPi * delta);
    const auto r = slit_oscillation_check(f, eps, true);
    CHECK(r.hypotheses_hold);
    CHECK(r.eps_a == doctest::Approx(c / (kPi * delta)).epsilon(1e-3));
    CHECK(r.holds);
    CHECK(r.center.radius <= r.bound);
  }
  SUBCASE("power law with the critical slit mismatch") {
    for (double eps : {0.1, 0.3, 0.5}) {
      const auto f = AnnulusFunction::sample(0.1, 10, 257, 256, preset_function("slit_power", eps, 0.1), true);
      const auto r = slit_oscillation_check(f, eps);
      CHECK(r.eps_b == doctest::Approx(eps).epsilon(1e-6));
      CHECK(r.drift <= eps / (1 - eps) + 1e-6);
      CHECK_FALSE(r.hypotheses_hold);
      CHECK_FALSE(r.failing.empty());
      CHECK_THROWS_AS(slit_oscillation_check(f, eps, true), HypothesisViolated);
    }
  }
  CHECK_THROWS_AS(slit_oscillation_check(closed("z", 1), 0.1), InvalidInput);
}

TEST_CASE("annulus validation") {
  CHECK_THROWS_AS(preset_function("sinh", 1, 0.1), UnknownPreset);
  CHECK_THROWS_AS(preset_function("slit_power", 1.5, 0.1), InvalidInput);
  CHECK_THROWS_AS(AnnulusFunction::sample(0.1, 0.05, 9, 16, preset_function("z", 1, 0.1)), InvalidInput);
  auto f = closed("z", 1);
  f.f[f.index(3, f.nth)] += 1.0;
  CHECK_THROWS_AS(f.validate(), InvalidInput);
}
