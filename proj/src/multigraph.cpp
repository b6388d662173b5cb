#include "minsurf/multigraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "minsurf/errors.hpp"
#include "minsurf/parallel.hpp"
#include "minsurf/quadrature.hpp"

namespace minsurf::multigraph {

namespace {

const Complex I1(0.0, 1.0);

// First and second derivative of a sampled line at index k: centered inside,
// one-sided second order at the ends.
template <class At>
double d1(const At& v, int k, int n, double h) {
  if (k == 0) return (-3 * v(0) + 4 * v(1) - v(2)) / (2 * h);
  if (k == n - 1) return (3 * v(n - 1) - 4 * v(n - 2) + v(n - 3)) / (2 * h);
  return (v(k + 1) - v(k - 1)) / (2 * h);
}

template <class At>
double d2(const At& v, int k, int n, double h) {
  if (k == 0) return (2 * v(0) - 5 * v(1) + 4 * v(2) - v(3)) / (h * h);
  if (k == n - 1) return (2 * v(n - 1) - 5 * v(n - 2) + 4 * v(n - 3) - v(n - 4)) / (h * h);
  return (v(k + 1) - 2 * v(k) + v(k - 1)) / (h * h);
}

struct Partials {
  double us, ut, uss, utt, ust;
};

Partials partials(const PolarGrid& g, const std::vector<double>& u, int i, int j) {
  auto row = [&](int jj) { return [&, jj](int ii) { return u[g.index(ii, jj)]; }; };
  auto col = [&](int ii) { return [&, ii](int jj) { return u[g.index(ii, jj)]; }; };
  Partials p;
  p.us = d1(row(j), i, g.nr, g.ds);
  p.uss = d2(row(j), i, g.nr, g.ds);
  p.ut = d1(col(i), j, g.nth, g.dth);
  p.utt = d2(col(i), j, g.nth, g.dth);
  auto us_at = [&](int jj) { return d1(row(jj), i, g.nr, g.ds); };
  p.ust = d1(us_at, j, g.nth, g.dth);
  return p;
}

// rho^2 |Hess u| from (s, theta) partials.
double scaled_hessian(const Partials& p) {
  const Complex dw(0.5 * p.us, -0.5 * p.ut);
  const Complex dww(0.25 * (p.uss - p.utt), -0.5 * p.ust);
  const double lap = 0.25 * (p.uss + p.utt);
  return std::sqrt(8 * lap * lap + 8 * std::norm(dww - dw));
}

Complex simpson_c(const std::vector<Complex>& v, double h) {
  std::vector<double> re(v.size()), im(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    re[k] = v[k].real();
    im[k] = v[k].imag();
  }
  return {quad::simpson(re, h), quad::simpson(im, h)};
}

}  // namespace

void Sector::validate() const {
  if (!(r1 > 0 && r2 > r1)) throw BadSector("sector needs 0 < r1 < r2");
  if (!(th2 > th1)) throw BadSector("sector needs th1 < th2");
}

double PolarGrid::rho(int i) const { return std::exp(s(i)); }

int PolarGrid::radial_node(double r) const {
  const double x = (std::log(r) - s0) / ds;
  const long k = std::lround(x);
  if (std::abs(x - k) > 1e-9 || k < 0 || k >= nr)
    throw GridMisaligned("radius " + std::to_string(r) + " is not a radial grid node");
  return static_cast<int>(k);
}

int PolarGrid::angular_node(double th) const {
  const double x = (th - th0) / dth;
  const long k = std::lround(x);
  if (std::abs(x - k) > 1e-9 || k < 0 || k >= nth)
    throw GridMisaligned("angle " + std::to_string(th) + " is not an angular grid node");
  return static_cast<int>(k);
}

PolarGrid PolarGrid::over(const Sector& sector, int nr, int per_turn) {
  sector.validate();
  if (nr < 5 || per_turn < 4) throw InvalidInput("polar grid needs nr >= 5 and per_turn >= 4");
  PolarGrid g;
  g.nr = nr;
  g.s0 = std::log(sector.r1);
  g.ds = (std::log(sector.r2) - g.s0) / (nr - 1);
  g.th0 = sector.th1;
  g.dth = kTwoPi / per_turn;
  const double cells = (sector.th2 - sector.th1) / g.dth;
  const long m = std::lround(cells);
  if (std::abs(cells - m) > 1e-9 * std::max(1.0, cells))
    throw GridMisaligned("sector width is not a multiple of 2 pi / per_turn");
  g.nth = static_cast<int>(m) + 1;
  if (g.nth < 5) throw InvalidInput("polar grid needs at least 5 angular nodes");
  return g;
}

MultiGraph MultiGraph::sample(const Sector& sector, int nr, int per_turn,
                              const std::function<double(double, double)>& f) {
  MultiGraph m;
  m.sector = sector;
  m.grid = PolarGrid::over(sector, nr, per_turn);
  m.u.resize(m.grid.size());
  for (int i = 0; i < m.grid.nr; ++i)
    for (int j = 0; j < m.grid.nth; ++j) m.u[m.grid.index(i, j)] = f(m.grid.rho(i), m.grid.theta(j));
  return m;
}

MultiGraph build_model(const std::string& name, const ModelParams& p, const Sector& sector,
                       int nr, int per_turn) {
  sector.validate();
  std::function<double(double, double)> base;
  if (name == "helicoid") {
    base = [c = p.c](double, double th) { return c * th / kTwoPi; };
  } else if (name == "catenoid_log") {
    base = [b = p.b](double rho, double) { return b * std::log(rho); };
  } else if (name == "standard") {
    if (!(p.r > 0)) throw BadSector("standard piece needs r > 0");
    base = [p](double rho, double th) { return p.a + p.b * std::log(rho / p.r) + p.c * th / kTwoPi; };
  } else if (name == "slab_arctan") {
    if (std::log(sector.r1) + p.shift < 1.0 - 1e-12)
      throw BadSector("slab_arctan needs log rho + shift >= 1 on the sector");
    base = [s = p.shift](double rho, double th) { return std::atan(th / (std::log(rho) + s)); };
  } else {
    throw UnknownPreset("unknown multi-valued graph model '" + name + "'");
  }
  const double delta = p.perturbation;
  return MultiGraph::sample(sector, nr, per_turn, [&](double rho, double th) {
    double v = base(rho, th);
    if (delta != 0.0) v += delta * std::sin(th) / std::sqrt(rho);
    return v;
  });
}

PolarField separation(const MultiGraph& g) {
  const auto& G = g.grid;
  const double per = kTwoPi / G.dth;
  const long K = std::lround(per);
  if (std::abs(per - K) > 1e-9 * per) throw GridMisaligned("2 pi is not a multiple of the angular step");
  if (G.nth <= K) throw GridMisaligned("angular range is narrower than 2 pi");
  PolarField w;
  w.grid = G;
  w.grid.nth = G.nth - static_cast<int>(K);
  w.v.resize(w.grid.size());
  for (int i = 0; i < G.nr; ++i)
    for (int j = 0; j < w.grid.nth; ++j) w.v[w.grid.index(i, j)] = g.at(i, j + K) - g.at(i, j);
  return w;
}

int sign_of(const PolarField& w) {
  bool pos = true, neg = true;
  for (double x : w.v) {
    pos = pos && x > 0;
    neg = neg && x < 0;
  }
  return pos ? 1 : (neg ? -1 : 0);
}

double sublinear_defect(const PolarField& w, double alpha, double r1, double r2) {
  if (sign_of(w) == 0) throw SignChange("sublinear_defect: separation changes sign");
  const auto& g = w.grid;
  const int j = g.angular_node(0.0);
  auto at = [&](double r) {
    const double x = (std::log(r) - g.s0) / g.ds;
    if (x < -1e-9 || x > g.nr - 1 + 1e-9) throw OutOfRange("sublinear_defect: radius outside the grid");
    const int i = std::clamp(static_cast<int>(std::floor(x)), 0, g.nr - 2);
    const double f = x - i;
    return std::abs((1 - f) * w.at(i, j) + f * w.at(i + 1, j));
  };
  return at(r2) - at(r1) * std::pow(r2 / r1, alpha);
}

LogGradient log_separation_gradient(const PolarField& w, double rho, double theta, double alpha) {
  if (sign_of(w) == 0) throw SignChange("log_separation_gradient: separation changes sign");
  const auto& g = w.grid;
  const int i = std::clamp(static_cast<int>(std::lround((std::log(rho) - g.s0) / g.ds)), 0, g.nr - 1);
  const int j = std::clamp(static_cast<int>(std::lround((theta - g.th0) / g.dth)), 0, g.nth - 1);
  std::vector<double> lw(w.v.size());
  for (std::size_t k = 0; k < lw.size(); ++k) lw[k] = std::log(std::abs(w.v[k]));
  const Partials p = partials(g, lw, i, j);
  LogGradient out;
  out.value = std::hypot(p.us, p.ut);
  out.within = out.value <= alpha;
  return out;
}

double StandardPiece::value(double rho, double theta) const {
  return a + b * std::log(rho / r) + c * theta / kTwoPi;
}

namespace {

struct Fields {
  std::vector<Complex> f;    // u_x - i u_y
  std::vector<double> lap;   // (u_ss + u_tt), so that Lap u dA = lap ds dtheta
};

Fields gradient_fields(const MultiGraph& g) {
  const auto& G = g.grid;
  Fields out{std::vector<Complex>(G.size()), std::vector<double>(G.size())};
  parallel_for(0, static_cast<std::size_t>(G.nr), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    for (int j = 0; j < G.nth; ++j) {
      const Partials p = partials(G, g.u, i, j);
      const std::size_t k = G.index(i, j);
      out.f[k] = std::polar(1.0 / G.rho(i), -G.theta(j)) * Complex(p.us, -p.ut);
      out.lap[k] = p.uss + p.utt;
    }
  });
  return out;
}

struct SectorIntegrals {
  double alpha;
  int j0, j1;        // angular nodes of alpha and alpha + 2 pi
  int i_in, i_r1, i_out;
  Complex K;
};

// Circle integral of f(z) * weight(z) dz over theta in [alpha, alpha + 2 pi].
template <class W>
Complex circle_integral(const PolarGrid& G, const Fields& F, int i, int j0, int j1, const W& weight) {
  std::vector<Complex> vals;
  const double r = G.rho(i);
  for (int j = j0; j <= j1; ++j) {
    const Complex z = std::polar(r, G.theta(j));
    vals.push_back(F.f[G.index(i, j)] * weight(z) * I1 * z);
  }
  return simpson_c(vals, G.dth);
}

// Integral over rho in [rho(ia), rho(ib)] of D(rho) * weight(z) d rho along
// the ray at angle alpha, D = f(rho, alpha + 2pi) - f(rho, alpha).
template <class W>
Complex slit_integral(const PolarGrid& G, const Fields& F, int ia, int ib, int j0, int j1,
                      double alpha, const W& weight) {
  if (ib <= ia) return 0.0;
  std::vector<Complex> vals;
  for (int i = ia; i <= ib; ++i) {
    const double r = G.rho(i);
    const Complex z = std::polar(r, alpha);
    vals.push_back((F.f[G.index(i, j1)] - F.f[G.index(i, j0)]) * weight(z) * r);
  }
  return simpson_c(vals, G.ds);
}

// Integral of Lap u * weight(z) dA over rho in [rho(ia), rho(ib)],
// theta in [alpha, alpha + 2 pi].
template <class W>
Complex area_integral(const PolarGrid& G, const Fields& F, int ia, int ib, int j0, int j1,
                      const W& weight) {
  if (ib <= ia) return 0.0;
  std::vector<Complex> radial;
  std::vector<Complex> ang(j1 - j0 + 1);
  for (int i = ia; i <= ib; ++i) {
    const double r = G.rho(i);
    for (int j = j0; j <= j1; ++j)
      ang[j - j0] = F.lap[G.index(i, j)] * weight(std::polar(r, G.theta(j)));
    radial.push_back(simpson_c(ang, G.dth));
  }
  return simpson_c(radial, G.ds);
}

SectorIntegrals sector_coefficient(const PolarGrid& G, const Fields& F, double alpha, double r1,
                                   double sqrtR) {
  SectorIntegrals s;
  s.alpha = alpha;
  s.j0 = G.angular_node(alpha);
  s.j1 = G.angular_node(alpha + kTwoPi);
  s.i_in = G.radial_node(1.0);
  s.i_r1 = G.radial_node(r1);
  s.i_out = G.radial_node(sqrtR);
  auto one = [](Complex) { return Complex(1.0, 0.0); };
  const Complex circle = circle_integral(G, F, s.i_in, s.j0, s.j1, one);
  const Complex slit = std::polar(1.0, alpha) * slit_integral(G, F, s.i_in, s.i_r1, s.j0, s.j1, alpha, one);
  const Complex area = area_integral(G, F, s.i_in, s.i_r1, s.j0, s.j1, one);
  s.K = (circle + slit + I1 * area) / (kTwoPi * I1);
  return s;
}

Complex bilinear(const PolarGrid& G, const std::vector<Complex>& f, double s, double th) {
  const double x = (s - G.s0) / G.ds, y = (th - G.th0) / G.dth;
  const int i = std::clamp(static_cast<int>(std::floor(x)), 0, G.nr - 2);
  const int j = std::clamp(static_cast<int>(std::floor(y)), 0, G.nth - 2);
  const double a = x - i, b = y - j;
  return (1 - a) * (1 - b) * f[G.index(i, j)] + a * (1 - b) * f[G.index(i + 1, j)] +
         (1 - a) * b * f[G.index(i, j + 1)] + a * b * f[G.index(i + 1, j + 1)];
}

}  // namespace

Decomposition cauchy_decompose(const MultiGraph& g, double r1, double R) {
  const auto& G = g.grid;
  for (double v : g.u)
    if (!std::isfinite(v)) throw NonFiniteSamples("cauchy_decompose: non-finite samples");
  const double sqrtR = std::sqrt(R);
  if (!(r1 >= 1.0) || !(2 * r1 <= sqrtR / 2 * (1 + 1e-12)))
    throw SectorTooSmall("cauchy_decompose: need r1 >= 1 and 2 r1 <= sqrt(R) / 2");
  const double tol = 1e-9;
  if (g.sector.r1 > 1.0 + tol || g.sector.r2 < sqrtR * (1 - tol) || g.sector.th1 > -kPi + tol ||
      g.sector.th2 < 3 * kPi - tol)
    throw SectorTooSmall("cauchy_decompose: samples must cover S_{1, sqrt R}^{-pi, 3 pi}");

  const Fields F = gradient_fields(g);
  const double alphas[3] = {0.0, -kPi / 2, kPi / 2};
  SectorIntegrals sec[3];
  Decomposition out;
  for (int k = 0; k < 3; ++k) {
    sec[k] = sector_coefficient(G, F, alphas[k], r1, sqrtR);
    out.sector_b[k] = sec[k].K.real();
    out.sector_c[k] = -kTwoPi * sec[k].K.imag();
  }
  out.K = sec[0].K;
  out.b = out.sector_b[0];
  out.c = out.sector_c[0];
  for (int k = 1; k < 3; ++k)
    out.cross_sector_spread = std::max({out.cross_sector_spread, std::abs(out.sector_b[k] - out.b),
                                        std::abs(out.sector_c[k] - out.c)});

  // Residual g = f - K / zeta on the target sector.
  const double ra = 2 * r1, rb = sqrtR / 2;
  std::vector<int> rows;
  for (int i = 0; i < G.nr; ++i)
    if (G.rho(i) >= ra * (1 - tol) && G.rho(i) <= rb * (1 + tol)) rows.push_back(i);
  const int ja = G.angular_node(0.0), jb = G.angular_node(kTwoPi);
  if (rows.size() < 2) throw SectorTooSmall("cauchy_decompose: target sector has no radial nodes");
  out.residual.grid = G;
  out.residual.grid.s0 = G.s(rows.front());
  out.residual.grid.nr = static_cast<int>(rows.size());
  out.residual.grid.th0 = 0.0;
  out.residual.grid.nth = jb - ja + 1;
  out.residual.v.resize(out.residual.grid.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (int j = ja; j <= jb; ++j) {
      const int i = rows[a];
      const Complex zeta = std::polar(G.rho(i), G.theta(j));
      const double gv = std::abs(F.f[G.index(i, j)] - out.K / zeta);
      out.residual.v[out.residual.grid.index(static_cast<int>(a), j - ja)] = gv;
      out.residual_sup = std::max(out.residual_sup, gv);
    }

  // Split of the remainder on a subsampled set of cell midpoints.
  const int nsr = 8, nst = 16;
  const double sa = std::log(ra), sb = std::log(rb);
  std::vector<ResidualNorms> per(nsr * nst);
  parallel_for(0, per.size(), [&](std::size_t q) {
    const int a = static_cast<int>(q) / nst, b = static_cast<int>(q) % nst;
    // Cell midpoint nearest to the sample position.
    const double s_target = sa + (sb - sa) * (a + 0.5) / nsr;
    const double t_target = kTwoPi * (b + 0.5) / nst;
    const double s = G.s0 + (std::floor((s_target - G.s0) / G.ds) + 0.5) * G.ds;
    const double th = G.th0 + (std::floor((t_target - G.th0) / G.dth) + 0.5) * G.dth;
    const Complex zeta = std::polar(std::exp(s), th);
    // Sector whose valid range [alpha + pi/2, alpha + 3pi/2] contains th.
    int k = 0;
    if (th < kPi / 2) k = 1;
    if (th > 3 * kPi / 2) k = 2;
    const SectorIntegrals& S = sec[k];
    const Complex ea = std::polar(1.0, S.alpha);
    auto cauchy = [zeta](Complex z) { return 1.0 / (z - zeta); };
    auto split = [zeta](Complex z) { return z / (zeta * (z - zeta)); };
    auto one = [](Complex) { return Complex(1.0, 0.0); };
    const Complex g1 = circle_integral(G, F, S.i_out, S.j0, S.j1, cauchy) / (kTwoPi * I1);
    const Complex g2 =
        -ea *
        (slit_integral(G, F, S.i_r1, S.i_out, S.j0, S.j1, S.alpha, cauchy) +
         slit_integral(G, F, S.i_in, S.i_r1, S.j0, S.j1, S.alpha, split)) /
        (kTwoPi * I1);
    const Complex g3 = (-circle_integral(G, F, S.i_in, S.j0, S.j1, cauchy) -
                        circle_integral(G, F, S.i_in, S.j0, S.j1, one) / zeta -
                        I1 * area_integral(G, F, S.i_in, S.i_out, S.j0, S.j1, cauchy) -
                        I1 * area_integral(G, F, S.i_in, S.i_r1, S.j0, S.j1, one) / zeta) /
                       (kTwoPi * I1);
    const Complex fz = bilinear(G, F.f, s, th);
    ResidualNorms& r = per[q];
    r.g1 = std::abs(g1);
    r.g2 = std::abs(g2);
    r.g3 = std::abs(g3);
    r.representation = std::abs(fz - (S.K / zeta + g1 + g2 + g3));
  });
  for (const auto& r : per) {
    out.norms.g1 = std::max(out.norms.g1, r.g1);
    out.norms.g2 = std::max(out.norms.g2, r.g2);
    out.norms.g3 = std::max(out.norms.g3, r.g3);
    out.norms.representation = std::max(out.norms.representation, r.representation);
  }
  return out;
}

Fit fit_standard_piece(const MultiGraph& g, double r1, double mu, double R) {
  if (!(mu > 1)) throw InvalidInput("fit_standard_piece: need mu > 1");
  if (!(mu * r1 <= std::sqrt(R) / 2 * (1 + 1e-12)))
    throw SectorTooSmall("fit_standard_piece: need mu r1 <= sqrt(R) / 2");
  Fit fit;
  fit.decomposition = cauchy_decompose(g, r1, R);
  fit.piece.b = fit.decomposition.b;
  fit.piece.c = fit.decomposition.c;
  fit.piece.r = r1;
  const auto& G = g.grid;
  const int ja = G.angular_node(0.0), jb = G.angular_node(kTwoPi);
  const double tol = 1e-9;
  quad::CompensatedSum sum;
  std::size_t count = 0;
  for (int i = 0; i < G.nr; ++i) {
    if (G.rho(i) < r1 * (1 - tol) || G.rho(i) > mu * r1 * (1 + tol)) continue;
    for (int j = ja; j <= jb; ++j) {
      sum.add(g.at(i, j) - fit.piece.value(G.rho(i), G.theta(j)));
      ++count;
    }
  }
  if (count == 0) throw SectorTooSmall("fit_standard_piece: target sector has no nodes");
  fit.piece.a = sum.value() / static_cast<double>(count);
  for (int i = 0; i < G.nr; ++i) {
    if (G.rho(i) < r1 * (1 - tol) || G.rho(i) > mu * r1 * (1 + tol)) continue;
    for (int j = ja; j <= jb; ++j)
      fit.misfit = std::max(fit.misfit, std::abs(g.at(i, j) - fit.piece.value(G.rho(i), G.theta(j))));
  }
  return fit;
}

WantitDiagnostic wantit_diagnostic(const MultiGraph& g, double r1, double r2) {
  const PolarField w = separation(g);
  WantitDiagnostic out;
  out.separation_sign = sign_of(w);
  const auto& G = g.grid;
  const auto& W = w.grid;
  const double tol = 1e-9;
  for (int i = 1; i < G.nr - 1; ++i) {
    const double rho = G.rho(i);
    if (rho < r1 * (1 - tol) || rho > r2 * (1 + tol)) continue;
    for (int j = 1; j < W.nth - 1; ++j) {
      const double th = G.theta(j);
      if (th < -tol || th > kTwoPi + tol) continue;
      const Partials pu = partials(G, g.u, i, j);
      const Partials pw = partials(W, w.v, i, j);
      const double wv = std::abs(w.at(i, j));
      double e = std::hypot(pu.us, pu.ut) / rho + scaled_hessian(pu) / rho;
      e += wv > 0 ? 4 * std::hypot(pw.us, pw.ut) / wv + scaled_hessian(pw) / wv
                  : std::numeric_limits<double>::infinity();
      out.epsilon = std::max(out.epsilon, e);
    }
  }
  return out;
}

}  // namespace minsurf::multigraph
