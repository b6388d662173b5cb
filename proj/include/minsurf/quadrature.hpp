#pragma once

#include <span>
#include <vector>

namespace minsurf::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule, cached after the first request.
const Rule& gauss_legendre(int n);

/// Composite Simpson on equally spaced samples; an odd interval count closes
/// with a 3/8 panel.
double simpson(std::span<const double> values, double h);

/// Kahan–Babuska summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace minsurf::quad
