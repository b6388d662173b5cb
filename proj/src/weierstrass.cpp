#include "minsurf/weierstrass.hpp"

#include <atomic>
#include <cmath>

#include <Eigen/SVD>
#include <json.hpp>

#include "minsurf/errors.hpp"
#include "minsurf/parallel.hpp"
#include "minsurf/quadrature.hpp"

namespace minsurf::weierstrass {

using nlohmann::json;

Domain Domain::annulus(double r_in, double r_out) {
  if (!(r_in > 0 && r_out > r_in)) throw InvalidInput("annulus domain needs 0 < r_in < r_out");
  Domain d;
  d.kind = Kind::Annulus;
  d.r_in = r_in;
  d.r_out = r_out;
  return d;
}

Domain Domain::rectangle(double re0, double re1, double im0, double im1) {
  if (!(re1 > re0 && im1 > im0)) throw InvalidInput("rectangle domain has empty interior");
  Domain d;
  d.kind = Kind::Rectangle;
  d.re0 = re0;
  d.re1 = re1;
  d.im0 = im0;
  d.im1 = im1;
  return d;
}

bool Domain::contains(Complex z, double tol) const {
  if (kind == Kind::Annulus) {
    const double r = std::abs(z);
    return r >= r_in * (1 - tol) && r <= r_out * (1 + tol);
  }
  const double sx = tol * std::max(1.0, re1 - re0), sy = tol * std::max(1.0, im1 - im0);
  return z.real() >= re0 - sx && z.real() <= re1 + sx && z.imag() >= im0 - sy &&
         z.imag() <= im1 + sy;
}

Data preset_data(const std::string& name) {
  Data d;
  d.name = name;
  if (name == "catenoid") {
    d.domain = Domain::annulus(0.5, 2.0);
    d.g = [](Complex z) { return z; };
    d.phi = [](Complex z) { return 1.0 / z; };
    d.z0 = {1.0, 0.0};
  } else if (name == "helicoid") {
    d.domain = Domain::rectangle(0.0, kTwoPi, -1.0, 1.0);
    d.g = [](Complex z) { return std::exp(Complex(0, 1) * z); };
    d.phi = [](Complex) { return Complex(1.0, 0.0); };
    d.z0 = {0.0, 0.0};
  } else if (name == "enneper") {
    // Centered away from the zero of g.
    d.domain = Domain::rectangle(0.5, 1.5, -0.5, 0.5);
    d.g = [](Complex z) { return z; };
    d.phi = [](Complex) { return Complex(1.0, 0.0); };
    d.z0 = {1.0, 0.0};
  } else {
    throw UnknownPreset("unknown Weierstrass preset '" + name + "'");
  }
  return d;
}

namespace {

Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InvalidInput("expected a number or [re, im], got " + j.dump());
}

Holo parse_function(const json& j) {
  if (!j.is_object() || j.size() != 1)
    throw InvalidInput("function descriptor must be an object with one key: " + j.dump());
  const auto it = j.begin();
  const std::string key = it.key();
  const json& val = it.value();
  if (key == "poly") {
    if (!val.is_array() || val.empty()) throw InvalidInput("poly needs a coefficient list");
    std::vector<Complex> c;
    for (const auto& x : val) c.push_back(parse_complex(x));
    return [c](Complex z) {
      Complex acc = 0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
      return acc;
    };
  }
  if (key == "monomial") {
    const Complex coef = val.contains("coef") ? parse_complex(val.at("coef")) : Complex(1, 0);
    if (!val.contains("power") || !val.at("power").is_number_integer())
      throw InvalidInput("monomial needs an integer power");
    const int p = val.at("power").get<int>();
    return [coef, p](Complex z) { return coef * std::pow(z, p); };
  }
  if (key == "exp") {
    const Complex coef = val.contains("coef") ? parse_complex(val.at("coef")) : Complex(1, 0);
    const Complex rate = val.contains("rate") ? parse_complex(val.at("rate")) : Complex(1, 0);
    return [coef, rate](Complex z) { return coef * std::exp(rate * z); };
  }
  if (key == "recip") {
    Holo f = parse_function(val);
    return [f](Complex z) { return 1.0 / f(z); };
  }
  if (key == "sum" || key == "product") {
    if (!val.is_array() || val.empty()) throw InvalidInput(key + " needs a non-empty list");
    std::vector<Holo> fs;
    for (const auto& x : val) fs.push_back(parse_function(x));
    const bool sum = key == "sum";
    return [fs, sum](Complex z) {
      Complex acc = sum ? Complex(0, 0) : Complex(1, 0);
      for (const auto& f : fs) acc = sum ? acc + f(z) : acc * f(z);
      return acc;
    };
  }
  throw InvalidInput("unknown function '" + key + "'");
}

}  // namespace

namespace {
Data data_from_parsed(const json& j);
}  // namespace

Data data_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("Weierstrass descriptor: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("Weierstrass descriptor must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (key != "name" && key != "domain" && key != "g" && key != "phi" && key != "z0")
      throw InvalidInput("Weierstrass descriptor: unknown key '" + key + "'");
  try {
    return data_from_parsed(j);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("Weierstrass descriptor: ") + e.what());
  }
}

namespace {

Data data_from_parsed(const json& j) {
  Data d;
  d.name = j.value("name", std::string("custom"));
  const json& dom = j.at("domain");
  if (dom.contains("annulus")) {
    const auto& a = dom.at("annulus");
    d.domain = Domain::annulus(a.at(0).get<double>(), a.at(1).get<double>());
  } else if (dom.contains("rectangle")) {
    const auto& r = dom.at("rectangle");
    d.domain = Domain::rectangle(r.at(0).get<double>(), r.at(1).get<double>(),
                                 r.at(2).get<double>(), r.at(3).get<double>());
  } else {
    throw InvalidInput("Weierstrass descriptor: domain must be annulus or rectangle");
  }
  d.g = parse_function(j.at("g"));
  d.phi = parse_function(j.at("phi"));
  d.z0 = j.contains("z0") ? parse_complex(j.at("z0")) : Complex(1, 0);
  if (!d.domain.contains(d.z0)) throw PathOutsideDomain("Weierstrass descriptor: z0 outside domain");
  return d;
}

}  // namespace

std::array<Complex, 3> integrand(const Data& data, Complex z) {
  const Complex g = data.g(z);
  const Complex phi = data.phi(z);
  const double ag = std::abs(g);
  if (!(ag >= 1e-8 && ag <= 1e8) || !(std::abs(phi) <= 1e8))
    throw SingularityOnPath("Weierstrass integrand singular near z = (" + std::to_string(z.real()) +
                            ", " + std::to_string(z.imag()) + ")");
  const Complex ginv = 1.0 / g;
  const Complex i(0.0, 1.0);
  return {0.5 * (ginv - g) * phi, 0.5 * i * (ginv + g) * phi, phi};
}

namespace {

// Integral of the component forms along z(tau), tau in [0, 1], split into
// `pieces` sub-intervals.
template <class Path>
std::array<Complex, 3> integrate_curve(const Data& data, const Path& path, int pieces,
                                       const QuadOptions& opts, bool check_domain) {
  const auto& rule = quad::gauss_legendre(opts.order);
  std::array<Complex, 3> acc{};
  for (int p = 0; p < pieces; ++p) {
    const double a = static_cast<double>(p) / pieces, b = static_cast<double>(p + 1) / pieces;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const auto [z, dz] = path(mid + half * rule.nodes[q]);
      if (check_domain && !data.domain.contains(z, 1e-9))
        throw PathOutsideDomain("Weierstrass path leaves the domain");
      const auto f = integrand(data, z);
      const Complex w = rule.weights[q] * half * dz;
      for (int c = 0; c < 3; ++c) acc[c] += f[c] * w;
    }
  }
  return acc;
}

int piece_count(double length, const QuadOptions& opts) {
  return std::max(1, static_cast<int>(std::ceil(length * opts.segments_per_unit - 1e-12)));
}

Vec3 real_part(const std::array<Complex, 3>& v) { return {v[0].real(), v[1].real(), v[2].real()}; }

}  // namespace

std::array<Complex, 3> path_integral(const Data& data, std::span<const Complex> path,
                                     const QuadOptions& opts, bool check_domain) {
  std::array<Complex, 3> acc{};
  // Polyline vertices are guarded too; quadrature nodes never reach them.
  if (path.size() > 1)
    for (const Complex& z : path) integrand(data, z);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Complex a = path[k], b = path[k + 1];
    if (a == b) continue;
    const auto seg = integrate_curve(
        data, [a, b](double tau) { return std::pair<Complex, Complex>(a + tau * (b - a), b - a); },
        piece_count(std::abs(b - a), opts), opts, check_domain);
    for (int c = 0; c < 3; ++c) acc[c] += seg[c];
  }
  return acc;
}

Vec3 integrate_immersion(const Data& data, std::span<const Complex> path, const QuadOptions& opts) {
  if (path.empty() || std::abs(path.front() - data.z0) > 1e-14 * std::max(1.0, std::abs(data.z0)))
    throw InvalidInput("integrate_immersion: path must start at the base point");
  for (const auto& z : path)
    if (!data.domain.contains(z)) throw PathOutsideDomain("integrate_immersion: vertex outside domain");
  return real_part(path_integral(data, path, opts));
}

Vec3 integrate_immersion(const Data& data, Complex z, const QuadOptions& opts) {
  const Complex path[2] = {data.z0, z};
  return integrate_immersion(data, std::span<const Complex>(path, 2), opts);
}

double period_defect(const Data& data, const std::vector<std::vector<Complex>>& loops,
                     const QuadOptions& opts) {
  double worst = 0.0;
  for (const auto& loop : loops) {
    if (loop.size() < 3) throw InvalidInput("period_defect: a loop needs at least 3 vertices");
    std::vector<Complex> closed(loop);
    if (closed.back() != closed.front()) closed.push_back(closed.front());
    for (const auto& z : closed)
      if (!data.domain.contains(z)) throw PathOutsideDomain("period_defect: loop vertex outside domain");
    worst = std::max(worst, real_part(path_integral(data, closed, opts)).norm());
  }
  return worst;
}

std::vector<Complex> circle_loop(double radius, int n, Complex center) {
  std::vector<Complex> out;
  for (int k = 0; k < n; ++k) out.push_back(center + std::polar(radius, kTwoPi * k / n));
  return out;
}

geom::ParamPatch make_patch(const Data& data, const GridSpec& spec, const QuadOptions& opts) {
  geom::ParamGrid grid;
  std::function<Complex(double, double)> Z;
  std::function<Complex(double, double, double, double)> dZ;  // Z_s ds + Z_t dt
  const Complex i(0.0, 1.0);
  if (data.domain.kind == Domain::Kind::Annulus) {
    grid = geom::ParamGrid::span(std::log(data.domain.r_in), std::log(data.domain.r_out), spec.ns,
                                 0.0, kTwoPi, spec.nt, true);
    Z = [](double s, double t) { return std::exp(Complex(s, t)); };
    dZ = [i](double s, double t, double vs, double vt) {
      return std::exp(Complex(s, t)) * (vs + i * vt);
    };
  } else {
    grid = geom::ParamGrid::span(data.domain.im0, data.domain.im1, spec.ns, data.domain.re0,
                                 data.domain.re1, spec.nt);
    Z = [](double s, double t) { return Complex(t, s); };
    dZ = [i](double, double, double vs, double vt) { return i * vs + vt; };
  }

  // Integral along the straight parameter segment (s0,t0) -> (s1,t1).
  auto edge = [&](double s0, double t0, double s1, double t1) {
    const double vs = s1 - s0, vt = t1 - t0;
    const double len = std::abs(dZ(0.5 * (s0 + s1), 0.5 * (t0 + t1), vs, vt));
    return integrate_curve(
        data,
        [&](double tau) {
          const double s = s0 + tau * vs, t = t0 + tau * vt;
          return std::pair<Complex, Complex>(Z(s, t), dZ(s, t, vs, vt));
        },
        piece_count(len, opts), opts, false);
  };

  // Base point in parameter coordinates.
  double sb, tb;
  if (data.domain.kind == Domain::Kind::Annulus) {
    sb = std::log(std::abs(data.z0));
    tb = std::arg(data.z0);
  } else {
    sb = data.z0.imag();
    tb = data.z0.real();
  }
  if (!data.domain.contains(data.z0)) throw PathOutsideDomain("make_patch: base point outside domain");

  std::vector<std::array<Complex, 3>> acc(grid.size());
  acc[grid.index(0, 0)] = edge(sb, tb, grid.s(0), grid.t(0));
  for (int a = 1; a < grid.ns; ++a) {
    const auto e = edge(grid.s(a - 1), grid.t(0), grid.s(a), grid.t(0));
    for (int c = 0; c < 3; ++c) acc[grid.index(a, 0)][c] = acc[grid.index(a - 1, 0)][c] + e[c];
  }
  std::atomic<bool> singular{false};
  parallel_for(0, static_cast<std::size_t>(grid.ns), [&](std::size_t aa) {
    const int a = static_cast<int>(aa);
    try {
      for (int b = 1; b < grid.nt; ++b) {
        const auto e = edge(grid.s(a), grid.t(b - 1), grid.s(a), grid.t(b));
        for (int c = 0; c < 3; ++c) acc[grid.index(a, b)][c] = acc[grid.index(a, b - 1)][c] + e[c];
      }
    } catch (const SingularityOnPath&) {
      singular = true;
    }
  });
  if (singular) throw SingularityOnPath("make_patch: Weierstrass data singular on the grid");

  std::vector<Vec3> pts(grid.size());
  for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = real_part(acc[k]);
  return geom::ParamPatch(grid, std::move(pts));
}

double rigid_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.size() != b.size() || a.empty()) throw InvalidInput("rigid_distance: size mismatch");
  Vec3 ca = Vec3::Zero(), cb = Vec3::Zero();
  for (std::size_t k = 0; k < a.size(); ++k) {
    ca += a[k];
    cb += b[k];
  }
  ca /= static_cast<double>(a.size());
  cb /= static_cast<double>(b.size());
  Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
  for (std::size_t k = 0; k < a.size(); ++k) H += (a[k] - ca) * (b[k] - cb).transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d D = Eigen::Matrix3d::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0) D(2, 2) = -1.0;
  const Eigen::Matrix3d R = svd.matrixV() * D * svd.matrixU().transpose();
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    worst = std::max(worst, (R * (a[k] - ca) + cb - b[k]).norm());
  return worst;
}

}  // namespace minsurf::weierstrass
