#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace minsurf::spectra {

struct HarmonicDim {
  int n = 0;
  int d = 0;
  std::int64_t value = 0;
  bool cross_checked = false;  // brute force ran and agreed
};

/// Dimension of harmonic homogeneous polynomials of degree k on R^n.
std::int64_t homogeneous_harmonic_dim(int n, int k);

/// Closed form sum over k <= d; cross-checked by brute force when n <= 4 and
/// d <= 12. Throws InvalidInput for n < 1 or d < 0, and InvalidInput if the
/// two counts disagree.
HarmonicDim dim_harmonic_poly(int n, int d);

/// Exact nullspace dimension of the Laplacian on polynomials of degree <= d.
/// Throws BruteForceTooLarge outside n <= 4, d <= 12.
std::int64_t brute_force_dim(int n, int d);

/// Rank of an integer matrix: a rank equal to the row count modulo a large
/// prime certifies full row rank, otherwise exact rational elimination.
std::size_t exact_rank(const std::vector<std::vector<std::int64_t>>& rows);

/// Least-squares slope of log dim against log d over d in [d_max/2, d_max].
double growth_exponent_fit(int n, int d_max);

struct ConeDegree {
  int k = 2;
  double p = 0;
  double lambda = 0;
};

/// lambda = p^2 + (k - 2) p.
ConeDegree cone_eigenvalue(int k, double p);

/// Nonnegative root p of p^2 + (k - 2) p = lambda. Throws NegativeEigenvalue.
double cone_degree(int k, double lambda);

/// First nonzero eigenvalue of the round S^n, from the degree-one cone.
double lichnerowicz_value(int n);

/// Node samples on a uniform 2-D or 3-D grid, last index fastest.
struct FlatGrid {
  std::vector<int> n;      // points per axis
  std::vector<double> h;   // spacing per axis
  std::vector<double> origin;

  std::size_t size() const;
};

struct BochnerReport {
  double max_residual = 0;  // |1/2 Lap|du|^2 - |Hess u|^2 - <grad Lap u, grad u>|
  double max_half_lap = 0;
  double max_hess2 = 0;
  double max_cross = 0;
  std::size_t nodes = 0;
};

/// All terms by centered differences on nodes two or more cells inside.
BochnerReport bochner_residual(const FlatGrid& grid, std::span<const double> u);

/// Fraction of samples with f^2 < eps^2 mean(f^2). Throws ZeroField.
double sublevel_fraction(std::span<const double> f, double eps);

}  // namespace minsurf::spectra
