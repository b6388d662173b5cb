#include "minsurf/annulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minsurf/errors.hpp"
#include "minsurf/parallel.hpp"
#include "minsurf/quadrature.hpp"

namespace minsurf::annulus {

namespace {

const Complex I1(0.0, 1.0);

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

Complex simpson_c(const std::vector<Complex>& v, double h) {
  std::vector<double> re(v.size()), im(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    re[k] = v[k].real();
    im[k] = v[k].imag();
  }
  return {quad::simpson(re, h), quad::simpson(im, h)};
}

// Mean over one circle: periodic trapezoid for closed data, Simpson over
// [0, 2 pi] for slit data.
Complex circle_mean(const AnnulusFunction& f, int i) {
  if (!f.slit) {
    Complex acc = 0;
    for (int j = 0; j < f.nth; ++j) acc += f.at(i, j);
    return acc / static_cast<double>(f.nth);
  }
  std::vector<Complex> v(f.nth + 1);
  for (int j = 0; j <= f.nth; ++j) v[j] = f.at(i, j);
  return simpson_c(v, f.dth()) / kTwoPi;
}

}  // namespace

double AnnulusFunction::ds() const { return std::log(R / delta) / (nr - 1); }
double AnnulusFunction::rho(int i) const { return delta * std::exp(ds() * i); }

void AnnulusFunction::validate() const {
  if (!(delta > 0 && R > delta)) throw InvalidInput("annulus: need 0 < delta < R");
  if (nr < 5 || nth < 8) throw InvalidInput("annulus: need nr >= 5 and nth >= 8");
  if (f.size() != static_cast<std::size_t>(nr) * (nth + 1))
    throw InvalidInput("annulus: sample count mismatch");
  for (const auto& v : f)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidInput("annulus: non-finite sample");
  if (!slit) {
    const double scale = std::max(1.0, max_abs(f));
    for (int i = 0; i < nr; ++i)
      if (std::abs(at(i, 0) - at(i, nth)) > 1e-12 * scale)
        throw InvalidInput("annulus: closed data must agree at theta = 0 and 2 pi");
  }
}

AnnulusFunction AnnulusFunction::sample(double delta, double R, int nr, int nth,
                                        const std::function<Complex(double, double)>& fn,
                                        bool slit) {
  AnnulusFunction a;
  a.delta = delta;
  a.R = R;
  a.nr = nr;
  a.nth = nth;
  a.slit = slit;
  if (!(delta > 0 && R > delta) || nr < 5 || nth < 8) throw InvalidInput("annulus: bad grid");
  a.f.resize(static_cast<std::size_t>(nr) * (nth + 1));
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nth; ++j) a.f[a.index(i, j)] = fn(a.rho(i), a.theta(j));
    a.f[a.index(i, nth)] = slit ? fn(a.rho(i), kTwoPi) : a.f[a.index(i, 0)];
  }
  a.validate();
  return a;
}

std::function<Complex(double, double)> preset_function(const std::string& name, double param,
                                                       double delta) {
  if (name == "const") return [param](double, double) { return Complex(param, 0.0); };
  if (name == "inv")
    return [param](double r, double t) { return param / std::polar(r, t); };
  if (name == "z") return [param](double r, double t) { return param * std::polar(r, t); };
  if (name == "z2")
    return [param](double r, double t) { return param * std::polar(r * r, 2 * t); };
  if (name == "zplus3") return [](double r, double t) { return std::polar(r, t) + 3.0; };
  if (name == "harmonic_log")
    return [param](double r, double) { return Complex(param * std::log(r) / (4 * kPi), 0.0); };
  if (name == "helicoid_gradient")
    return [param](double r, double t) { return -I1 * param / (kTwoPi * std::polar(r, t)); };
  if (name == "slit_power") {
    const double e = param;
    if (!(e > 0 && e < 1)) throw InvalidInput("slit_power needs 0 < eps < 1");
    const double k = kPi * e * std::pow(delta, 1 - e) / std::sin(kPi * e);
    return [k, e](double r, double t) { return k * std::polar(std::pow(r, e - 1), -(1 - e) * t); };
  }
  throw UnknownPreset("unknown annulus function '" + name + "'");
}

Average circular_average(const AnnulusFunction& f, double s) {
  if (!(s >= f.delta * (1 - 1e-12) && s <= f.R * (1 + 1e-12)))
    throw OutOfRange("circular_average: radius outside [delta, R]");
  const int i = std::clamp(static_cast<int>(std::lround(std::log(s / f.delta) / f.ds())), 0, f.nr - 1);
  return {circle_mean(f, i), f.rho(i)};
}

double average_drift(const AnnulusFunction& f) {
  const Complex base = circle_mean(f, 0);
  double d = 0.0;
  for (int i = 1; i < f.nr; ++i) d = std::max(d, std::abs(circle_mean(f, i) - base));
  return d;
}

std::vector<Complex> angular_derivative(const AnnulusFunction& f, int i) {
  const int n = f.nth;
  const double h = f.dth();
  if (!f.slit) {
    std::vector<Complex> coef(n), out(n + 1);
    for (int k = 0; k < n; ++k) {
      Complex acc = 0;
      for (int j = 0; j < n; ++j) acc += f.at(i, j) * std::polar(1.0, -kTwoPi * double(k) * j / n);
      coef[k] = acc / static_cast<double>(n);
    }
    for (int k = 0; k < n; ++k) {
      const int m = k <= n / 2 ? k : k - n;
      coef[k] *= (2 * m == n) ? Complex(0.0) : I1 * static_cast<double>(m);
    }
    for (int j = 0; j < n; ++j) {
      Complex acc = 0;
      for (int k = 0; k < n; ++k) acc += coef[k] * std::polar(1.0, kTwoPi * double(k) * j / n);
      out[j] = acc;
    }
    out[n] = out[0];
    return out;
  }
  auto v = [&](int j) { return f.at(i, j); };
  std::vector<Complex> out(n + 1);
  for (int j = 0; j <= n; ++j) {
    if (j >= 2 && j <= n - 2)
      out[j] = (-v(j + 2) + 8.0 * v(j + 1) - 8.0 * v(j - 1) + v(j - 2)) / (12 * h);
    else if (j == 0)
      out[j] = (-25.0 * v(0) + 48.0 * v(1) - 36.0 * v(2) + 16.0 * v(3) - 3.0 * v(4)) / (12 * h);
    else if (j == 1)
      out[j] = (-3.0 * v(0) - 10.0 * v(1) + 18.0 * v(2) - 6.0 * v(3) + v(4)) / (12 * h);
    else if (j == n)
      out[j] = (25.0 * v(n) - 48.0 * v(n - 1) + 36.0 * v(n - 2) - 16.0 * v(n - 3) + 3.0 * v(n - 4)) / (12 * h);
    else
      out[j] = (3.0 * v(n) + 10.0 * v(n - 1) - 18.0 * v(n - 2) + 6.0 * v(n - 3) - v(n - 4)) / (12 * h);
  }
  return out;
}

ChebyshevCenter min_max_center(const AnnulusFunction& f) {
  const int cols = f.slit ? f.nth + 1 : f.nth;
  auto farthest = [&](Complex c, Complex& p) {
    double best = -1.0;
    for (int i = 0; i < f.nr; ++i)
      for (int j = 0; j < cols; ++j) {
        const double d = std::abs(f.at(i, j) - c);
        if (d > best) {
          best = d;
          p = f.at(i, j);
        }
      }
    return best;
  };
  ChebyshevCenter out;
  Complex c = circle_mean(f, 0), p;
  out.at_average = farthest(c, p);
  out.center = c;
  out.radius = out.at_average;
  for (int k = 1; k <= 20; ++k) {
    c += (p - c) / static_cast<double>(k + 1);
    const double r = farthest(c, p);
    if (r < out.radius) {
      out.radius = r;
      out.center = c;
    }
  }
  return out;
}

OscillationReport oscillation_check(const AnnulusFunction& f, double tol) {
  OscillationReport rep;
  for (int i : {0, f.nr - 1}) {
    const auto d = angular_derivative(f, i);
    std::vector<double> mag(f.nth + 1);
    for (int j = 0; j <= f.nth; ++j) mag[j] = std::abs(d[j]);
    if (!f.slit) {
      double acc = 0.0;
      for (int j = 0; j < f.nth; ++j) acc += mag[j];
      rep.eps_hat += acc * f.dth();
    } else {
      rep.eps_hat += quad::simpson(mag, f.dth());
    }
  }
  rep.center = min_max_center(f);
  rep.holds = rep.center.radius <= rep.eps_hat + tol;
  return rep;
}

EnergyReport annulus_energy(const AnnulusFunction& f, double R_param, double t) {
  if (!(R_param > 0) || !(t > 0)) throw InvalidInput("annulus_energy: need R > 0 and t > 0");
  const double s_mid = 0.5 * std::log(R_param);
  const double lo = s_mid - t, hi = s_mid + t;
  const double s_del = std::log(f.delta);
  const double ds = f.ds();
  if (lo < s_del - 1e-12 || hi > std::log(f.R) + 1e-12)
    throw WindowOutOfRange("annulus_energy: window leaves the sampled annulus");

  // e(s) = integral over the circle of |f_theta|^2 d theta, so that
  // E = integral of e(s) ds.
  std::vector<double> e(f.nr);
  parallel_for(0, static_cast<std::size_t>(f.nr), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    const auto d = angular_derivative(f, i);
    if (!f.slit) {
      double acc = 0.0;
      for (int j = 0; j < f.nth; ++j) acc += std::norm(d[j]);
      e[i] = acc * f.dth();
    } else {
      std::vector<double> v(f.nth + 1);
      for (int j = 0; j <= f.nth; ++j) v[j] = std::norm(d[j]);
      e[i] = quad::simpson(v, f.dth());
    }
  });
  // Cubic Lagrange interpolation through the four nearest nodes.
  auto interp = [&](double s) {
    const double x = (s - s_del) / ds;
    const int k = std::clamp(static_cast<int>(std::floor(x)) - 1, 0, f.nr - 4);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
      double w = 1.0;
      for (int b = 0; b < 4; ++b)
        if (b != a) w *= (x - (k + b)) / static_cast<double>(a - b);
      acc += w * e[k + a];
    }
    return acc;
  };
  const auto& rule = quad::gauss_legendre(4);
  quad::CompensatedSum acc;
  const int first = static_cast<int>(std::floor((lo - s_del) / ds));
  const int last = static_cast<int>(std::ceil((hi - s_del) / ds));
  for (int c = first; c < last; ++c) {
    const double a = std::max(lo, s_del + c * ds), b = std::min(hi, s_del + (c + 1) * ds);
    if (!(b > a)) continue;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      acc.add(0.5 * (b - a) * rule.weights[q] * interp(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[q]));
  }
  EnergyReport rep;
  rep.energy = acc.value();
  rep.bound = kTwoPi * std::exp(2 * t) / R_param;
  const int im = std::clamp(static_cast<int>(std::lround((s_mid - s_del) / ds)), 0, f.nr - 1);
  rep.boundary_radius = f.rho(im);
  const auto d = angular_derivative(f, im);
  for (const auto& v : d)
    rep.boundary_grad2 = std::max(rep.boundary_grad2, std::norm(v) / (rep.boundary_radius * rep.boundary_radius));
  rep.pointwise_bound = 32.0 / (R_param * R_param);
  return rep;
}

SlitReport slit_oscillation_check(const AnnulusFunction& f, double eps, bool strict, double tol) {
  if (!f.slit) throw InvalidInput("slit_oscillation_check: data must be slit");
  if (!(eps > 0 && eps < 1)) throw InvalidInput("slit_oscillation_check: need 0 < eps < 1");
  SlitReport rep;
  for (int i = 0; i < f.nr; ++i) {
    const auto d = angular_derivative(f, i);
    for (int j = 0; j <= f.nth; ++j) rep.eps_a = std::max(rep.eps_a, std::abs(f.at(i, j)) + std::abs(d[j]));
    const double m = std::abs(f.at(i, f.nth) - f.at(i, 0));
    const double q = f.delta / f.rho(i);
    double e_i = 0.0;
    if (m > 0) {
      auto rhs = [&](double e) { return kTwoPi * e * std::pow(q, 1 - e); };
      if (m > rhs(1.0)) {
        e_i = 1.0;
      } else {
        double a = 0.0, b = 1.0;
        for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
          const double c = 0.5 * (a + b);
          (m <= rhs(c) ? b : a) = c;
        }
        e_i = b;
      }
    }
    rep.eps_b = std::max(rep.eps_b, e_i);
  }
  if (rep.eps_a > eps + tol)
    rep.failing = "|f| + rho |grad f| <= eps";
  else if (rep.eps_b > eps + tol)
    rep.failing = "|f(rho, 2 pi) - f(rho, 0)| <= 2 pi eps (delta / rho)^(1 - eps)";
  rep.hypotheses_hold = rep.failing.empty();
  if (strict && !rep.hypotheses_hold) throw HypothesisViolated("slit_oscillation_check: " + rep.failing);

  const Complex base = circle_mean(f, 0);
  for (int i = 1; i < f.nr; ++i) rep.drift = std::max(rep.drift, std::abs(circle_mean(f, i) - base));
  rep.drift_bound = rep.eps_b < 1 ? rep.eps_b / (1 - rep.eps_b) : std::numeric_limits<double>::infinity();
  rep.center = min_max_center(f);
  rep.bound = eps / (1 - eps) + kTwoPi * eps;
  rep.holds = rep.center.radius <= rep.bound + tol;
  return rep;
}

}  // namespace minsurf::annulus
