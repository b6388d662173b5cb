#include "minsurf/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "minsurf/errors.hpp"

namespace minsurf::spectra {

namespace {

std::int64_t binom(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Exponent vectors of length n with total degree k, in lexicographic order.
void monomials(int n, int k, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(k);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = k; e >= 0; --e) {
    cur.push_back(e);
    monomials(n, k - e, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> monomials(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0) return out;
  std::vector<int> cur;
  monomials(n, k, cur, out);
  return out;
}

constexpr std::int64_t kPrime = 2147483647;  // 2^31 - 1

std::int64_t mod(std::int64_t a) {
  a %= kPrime;
  return a < 0 ? a + kPrime : a;
}

std::int64_t inv_mod(std::int64_t a) {
  std::int64_t r = 1, e = kPrime - 2;
  a = mod(a);
  while (e) {
    if (e & 1) r = r * a % kPrime;
    a = a * a % kPrime;
    e >>= 1;
  }
  return r;
}

std::size_t rank_mod_p(std::vector<std::vector<std::int64_t>> m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  for (auto& row : m)
    for (auto& x : row) x = mod(x);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    const std::int64_t inv = inv_mod(m[rank][c]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      const std::int64_t fct = m[r][c] * inv % kPrime;
      for (std::size_t k = c; k < cols; ++k) m[r][k] = mod(m[r][k] - fct * m[rank][k]);
    }
    ++rank;
  }
  return rank;
}

std::size_t rank_rational(const std::vector<std::vector<std::int64_t>>& rows) {
  using boost::multiprecision::cpp_rational;
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  std::vector<std::vector<cpp_rational>> m;
  for (const auto& r : rows) m.emplace_back(r.begin(), r.end());
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      const cpp_rational fct = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= fct * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::int64_t homogeneous_harmonic_dim(int n, int k) {
  if (n < 1 || k < 0) throw InvalidInput("homogeneous_harmonic_dim: need n >= 1, k >= 0");
  return binom(n + k - 1, n - 1) - binom(n + k - 3, n - 1);
}

std::size_t exact_rank(const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t r = rank_mod_p(rows);
  if (r == rows.size()) return r;
  return rank_rational(rows);
}

std::int64_t brute_force_dim(int n, int d) {
  if (n < 1 || d < 0) throw InvalidInput("brute_force_dim: need n >= 1, d >= 0");
  if (n > 4 || d > 12) throw BruteForceTooLarge("brute_force_dim: limited to n <= 4, d <= 12");
  std::int64_t total = 0;
  for (int k = 0; k <= d; ++k) {
    const auto src = monomials(n, k);
    const auto dst = monomials(n, k - 2);
    if (dst.empty()) {
      total += static_cast<std::int64_t>(src.size());
      continue;
    }
    std::map<std::vector<int>, std::size_t> where;
    for (std::size_t r = 0; r < dst.size(); ++r) where[dst[r]] = r;
    // Rows indexed by target monomials, columns by source monomials.
    std::vector<std::vector<std::int64_t>> m(dst.size(), std::vector<std::int64_t>(src.size(), 0));
    for (std::size_t c = 0; c < src.size(); ++c)
      for (int a = 0; a < n; ++a) {
        const int e = src[c][a];
        if (e < 2) continue;
        auto tgt = src[c];
        tgt[a] -= 2;
        m[where.at(tgt)][c] += static_cast<std::int64_t>(e) * (e - 1);
      }
    total += static_cast<std::int64_t>(src.size()) - static_cast<std::int64_t>(exact_rank(m));
  }
  return total;
}

HarmonicDim dim_harmonic_poly(int n, int d) {
  if (n < 1 || d < 0) throw InvalidInput("dim_harmonic_poly: need n >= 1, d >= 0");
  HarmonicDim h;
  h.n = n;
  h.d = d;
  for (int k = 0; k <= d; ++k) h.value += homogeneous_harmonic_dim(n, k);
  if (n <= 4 && d <= 12) {
    const std::int64_t b = brute_force_dim(n, d);
    if (b != h.value)
      throw InvalidInput("dim_harmonic_poly: closed form " + std::to_string(h.value) +
                         " disagrees with brute force " + std::to_string(b));
    h.cross_checked = true;
  }
  return h;
}

double growth_exponent_fit(int n, int d_max) {
  if (d_max < 8) throw InvalidInput("growth_exponent_fit: need d_max >= 8");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  std::int64_t dim = 0;
  for (int d = 0; d <= d_max; ++d) {
    dim += homogeneous_harmonic_dim(n, d);
    if (d < d_max / 2) continue;
    const double x = std::log(static_cast<double>(d)), y = std::log(static_cast<double>(dim));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

ConeDegree cone_eigenvalue(int k, double p) {
  if (k < 2) throw InvalidInput("cone_eigenvalue: need k >= 2");
  if (!(p >= 0)) throw InvalidInput("cone_eigenvalue: need p >= 0");
  return {k, p, p * p + (k - 2) * p};
}

double cone_degree(int k, double lambda) {
  if (k < 2) throw InvalidInput("cone_degree: need k >= 2");
  if (!(lambda >= 0)) throw NegativeEigenvalue("cone_degree: eigenvalue must be non-negative");
  const double b = k - 2;
  // Cancellation-free form of (-b + sqrt(b^2 + 4 lambda)) / 2.
  const double root = std::sqrt(b * b + 4 * lambda);
  return lambda == 0 ? 0.0 : 2 * lambda / (b + root);
}

double lichnerowicz_value(int n) {
  if (n < 1) throw InvalidInput("lichnerowicz_value: need n >= 1");
  return cone_eigenvalue(n + 1, 1.0).lambda;
}

std::size_t FlatGrid::size() const {
  std::size_t s = 1;
  for (int k : n) s *= static_cast<std::size_t>(k);
  return s;
}

BochnerReport bochner_residual(const FlatGrid& grid, std::span<const double> u) {
  const int dim = static_cast<int>(grid.n.size());
  if (dim < 2 || dim > 3 || grid.h.size() != grid.n.size())
    throw InvalidInput("bochner_residual: grid must be 2-D or 3-D");
  if (u.size() != grid.size()) throw InvalidInput("bochner_residual: sample count mismatch");
  for (int k : grid.n)
    if (k < 5) throw InvalidInput("bochner_residual: need at least 5 points per axis");
  std::vector<std::ptrdiff_t> stride(dim);
  stride[dim - 1] = 1;
  for (int a = dim - 2; a >= 0; --a) stride[a] = stride[a + 1] * grid.n[a + 1];

  auto grad = [&](std::ptrdiff_t x, int a) {
    return (u[x + stride[a]] - u[x - stride[a]]) / (2 * grid.h[a]);
  };
  auto grad2 = [&](std::ptrdiff_t x) {
    double s = 0;
    for (int a = 0; a < dim; ++a) s += grad(x, a) * grad(x, a);
    return s;
  };
  auto lap = [&](std::ptrdiff_t x) {
    double s = 0;
    for (int a = 0; a < dim; ++a)
      s += (u[x + stride[a]] - 2 * u[x] + u[x - stride[a]]) / (grid.h[a] * grid.h[a]);
    return s;
  };

  BochnerReport rep;
  std::vector<int> idx(dim, 2);
  for (;;) {
    std::ptrdiff_t x = 0;
    for (int a = 0; a < dim; ++a) x += idx[a] * stride[a];
    double half_lap = 0, hess2 = 0, cross = 0;
    const double G0 = grad2(x);
    for (int a = 0; a < dim; ++a) {
      const double ha = grid.h[a];
      half_lap += 0.5 * (grad2(x + stride[a]) - 2 * G0 + grad2(x - stride[a])) / (ha * ha);
      cross += (lap(x + stride[a]) - lap(x - stride[a])) / (2 * ha) * grad(x, a);
      for (int b = 0; b < dim; ++b) {
        double H;
        if (a == b) {
          H = (u[x + stride[a]] - 2 * u[x] + u[x - stride[a]]) / (ha * ha);
        } else {
          H = (u[x + stride[a] + stride[b]] - u[x + stride[a] - stride[b]] -
               u[x - stride[a] + stride[b]] + u[x - stride[a] - stride[b]]) /
              (4 * ha * grid.h[b]);
        }
        hess2 += H * H;
      }
    }
    rep.max_residual = std::max(rep.max_residual, std::abs(half_lap - hess2 - cross));
    rep.max_half_lap = std::max(rep.max_half_lap, std::abs(half_lap));
    rep.max_hess2 = std::max(rep.max_hess2, hess2);
    rep.max_cross = std::max(rep.max_cross, std::abs(cross));
    ++rep.nodes;
    int a = dim - 1;
    while (a >= 0 && ++idx[a] > grid.n[a] - 3) idx[a--] = 2;
    if (a < 0) break;
  }
  return rep;
}

double sublevel_fraction(std::span<const double> f, double eps) {
  if (f.empty()) throw ZeroField("sublevel_fraction: no samples");
  if (!(eps >= 0)) throw InvalidInput("sublevel_fraction: eps must be non-negative");
  double mean = 0;
  for (double v : f) mean += v * v;
  mean /= static_cast<double>(f.size());
  if (!(mean > 0)) throw ZeroField("sublevel_fraction: field vanishes identically");
  const double thr = eps * eps * mean;
  std::size_t count = 0;
  for (double v : f)
    if (v * v < thr) ++count;
  return static_cast<double>(count) / static_cast<double>(f.size());
}

}  // namespace minsurf::spectra
