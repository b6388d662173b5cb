#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace minsurf {

using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace minsurf
