#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <cstdint>
#include <functional>
#include <vector>

#include "minsurf/common.hpp"
#include "minsurf/errors.hpp"
#include "minsurf/spectra.hpp"

using namespace minsurf;
using namespace minsurf::spectra;

namespace {

// Independent count: dim of degree-k harmonics in n variables from the
// recursion H(n, k) = sum_{j <= k} H(n - 1, j) restricted to parity-free
// generating function (1 + t)/(1 - t)^(n - 1).
std::int64_t generating_count(int n, int d) {
  // coefficients of (1 + t) (1 - t)^{-(n-1)}, summed to degree d
  std::vector<std::int64_t> c(d + 1, 0);
  c[0] = 1;
  for (int f = 0; f < n - 1; ++f)
    for (int k = 1; k <= d; ++k) c[k] += c[k - 1];
  std::int64_t total = 0;
  for (int k = 0; k <= d; ++k) total += c[k] + (k >= 1 ? c[k - 1] : 0);
  return total;
}

std::vector<double> grid_sample(const FlatGrid& g, const std::function<double(const std::vector<double>&)>& f) {
  std::vector<double> out;
  std::vector<int> idx(g.n.size(), 0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    std::size_t r = k;
    for (int a = static_cast<int>(g.n.size()) - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(r % g.n[a]);
      r /= g.n[a];
    }
    std::vector<double> x(g.n.size());
    for (std::size_t a = 0; a < x.size(); ++a) x[a] = g.origin[a] + idx[a] * g.h[a];
    out.push_back(f(x));
  }
  return out;
}

}  // namespace

TEST_CASE("harmonic polynomial dimensions") {
  for (int n = 1; n <= 5; ++n) CHECK(dim_harmonic_poly(n, 0).value == 1);
  CHECK(dim_harmonic_poly(3, 1).value == 4);
  CHECK(dim_harmonic_poly(2, 3).value == 7);
  CHECK(dim_harmonic_poly(2, 3).cross_checked);
  for (int d = 1; d <= 12; ++d) CHECK(dim_harmonic_poly(1, d).value == 2);
  for (int n = 1; n <= 4; ++n)
    for (int d = 0; d <= 12; ++d) {
      CAPTURE(n);
      CAPTURE(d);
      CHECK(brute_force_dim(n, d) == generating_count(n, d));
      CHECK(dim_harmonic_poly(n, d).value == generating_count(n, d));
    }
  for (int d = 0; d <= 30; ++d) CHECK(dim_harmonic_poly(3, d).value == (d + 1) * (d + 1));
  const auto big = dim_harmonic_poly(6, 20);
  CHECK_FALSE(big.cross_checked);
  CHECK(big.value == generating_count(6, 20));
  CHECK_THROWS_AS(brute_force_dim(5, 3), BruteForceTooLarge);
  CHECK_THROWS_AS(brute_force_dim(3, 13), BruteForceTooLarge);
  CHECK_THROWS_AS(dim_harmonic_poly(0, 3), InvalidInput);
  CHECK_THROWS_AS(dim_harmonic_poly(3, -1), InvalidInput);
}

TEST_CASE("property: dimensions are nondecreasing in d") {
  for (int n = 1; n <= 7; ++n)
    for (int d = 1; d <= 40; ++d) CHECK(dim_harmonic_poly(n, d).value >= dim_harmonic_poly(n, d - 1).value);
}

TEST_CASE("exact rank") {
  CHECK(exact_rank({{1, 2}, {2, 4}}) == 1);
  CHECK(exact_rank({{1, 0, 0}, {0, 1, 0}}) == 2);
  CHECK(exact_rank({{0, 0}, {0, 0}}) == 0);
  // Rank drops only over Q here, not modulo small primes.
  CHECK(exact_rank({{2147483647, 1}, {0, 1}}) == 2);
  CHECK(exact_rank({{3, 5, 7}, {6, 10, 14}, {1, 1, 1}}) == 2);
}

TEST_CASE("growth exponents") {
  CHECK(growth_exponent_fit(2, 40) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(growth_exponent_fit(3, 40) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::abs(growth_exponent_fit(1, 40)) < 1e-12);
  CHECK(std::abs(growth_exponent_fit(4, 100) - 3) <= 0.15);
  CHECK_THROWS_AS(growth_exponent_fit(3, 7), InvalidInput);
}

TEST_CASE("cone degree and eigenvalue") {
  for (int k = 2; k <= 8; ++k) {
    CHECK(cone_eigenvalue(k, 0).lambda == 0.0);
    CHECK(cone_eigenvalue(k, 1).lambda == k - 1);
    for (int d = 0; d <= 10; ++d) CHECK(cone_degree(k, d * d + (k - 2.0) * d) == doctest::Approx(d).epsilon(1e-14));
    for (double p : {0.0, 1e-9, 0.37, 2.5, 1e3}) {
      const double back = cone_degree(k, cone_eigenvalue(k, p).lambda);
      CHECK(std::abs(back - p) <= 1e-14 * std::max(1.0, p));
    }
  }
  CHECK_THROWS_AS(cone_degree(3, -0.1), NegativeEigenvalue);
  CHECK(lichnerowicz_value(1) == 1.0);
  CHECK(lichnerowicz_value(2) == 2.0);
  CHECK(lichnerowicz_value(3) == 3.0);
}

TEST_CASE("Bochner formula in flat space") {
  const double h = 0.05;
  const FlatGrid g2{{41, 41}, {h, h}, {-1, -1}};
  SUBCASE("linear") {
    const auto r = bochner_residual(g2, grid_sample(g2, [](const auto& x) { return 2 * x[0] - 3 * x[1] + 1; }));
    CHECK(r.max_residual < 1e-9);
    CHECK(r.max_hess2 < 1e-9);
    CHECK(r.max_half_lap < 1e-9);
  }
  SUBCASE("harmonic quadratic") {
    const auto r = bochner_residual(g2, grid_sample(g2, [](const auto& x) { return x[0] * x[0] - x[1] * x[1]; }));
    CHECK(r.max_hess2 == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(r.max_half_lap == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(r.max_cross < 1e-8);
    CHECK(r.max_residual < 1e-8);
  }
  SUBCASE("cubic: residual is the stencil error 9 h^2") {
    for (double hh : {0.05, 0.025}) {
      const FlatGrid g{{41, 9}, {hh, hh}, {-1, 0}};
      const auto r = bochner_residual(g, grid_sample(g, [](const auto& x) { return x[0] * x[0] * x[0]; }));
      CHECK(r.max_residual == doctest::Approx(9 * hh * hh).epsilon(1e-6));
    }
  }
  SUBCASE("3-D quartic decays at second order") {
    std::vector<double> res;
    for (int n : {33, 65}) {
      const double hh = 1.0 / (n - 1);
      const FlatGrid g{{n, n, n}, {hh, hh, hh}, {0, 0, 0}};
      const auto r = bochner_residual(g, grid_sample(g, [](const auto& x) {
        return x[0] * x[0] * x[1] * x[1] + x[2] * x[2] * x[2] * x[0] - x[1] * x[2];
      }));
      CHECK(r.nodes == std::size_t(n - 4) * (n - 4) * (n - 4));
      res.push_back(r.max_residual);
    }
    CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.1));
  }
}

TEST_CASE("sublevel fractions") {
  const int N = 256;
  std::vector<double> f(N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) f[std::size_t(i) * N + j] = std::sin(3 * kTwoPi * (i + 0.5) / N);
  double prev = -1;
  for (double eps : {0.01, 0.05, 0.1, 0.3, 0.5, 1.0, 1.4}) {
    const double v = sublevel_fraction(f, eps);
    CHECK(std::abs(v - 2 / kPi * std::asin(eps / std::sqrt(2.0))) <= 2.0 / N);
    CHECK(v >= prev);
    prev = v;
    std::vector<double> scaled(f);
    for (double& x : scaled) x *= -7.5;
    CHECK(sublevel_fraction(scaled, eps) == v);
  }
  const std::vector<double> one(100, 1.0);
  CHECK(sublevel_fraction(one, 2.0) == 1.0);
  CHECK(sublevel_fraction(one, 0.5) == 0.0);
  CHECK(sublevel_fraction(one, 1.0) == 0.0);
  CHECK_THROWS_AS(sublevel_fraction(std::vector<double>(10, 0.0), 0.5), ZeroField);
}
