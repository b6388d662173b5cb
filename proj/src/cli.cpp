#include "minsurf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "minsurf/acceptance.hpp"
#include "minsurf/annulus.hpp"
#include "minsurf/errors.hpp"
#include "minsurf/geomcore.hpp"
#include "minsurf/graphflow.hpp"
#include "minsurf/io.hpp"
#include "minsurf/monotonicity.hpp"
#include "minsurf/multigraph.hpp"
#include "minsurf/report.hpp"
#include "minsurf/ricciwidth.hpp"
#include "minsurf/spectra.hpp"
#include "minsurf/weierstrass.hpp"

namespace minsurf::cli {

namespace {

using json = nlohmann::json;

// ---------------------------------------------------------------- helpers

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto t = io::parse_csv("v\n" + tok + "\n");
    out.push_back(t.rows.at(0).at(0));
  }
  if (expected && out.size() != expected)
    throw UsageError(what + " expects " + std::to_string(expected) + " comma-separated numbers, got '" + text + "'");
  if (out.empty()) throw UsageError(what + " is empty");
  return out;
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t a = 0, b = 0;
    const int n = std::stoi(text.substr(0, x), &a);
    const int m = std::stoi(text.substr(x + 1), &b);
    if (a != x || b != text.size() - x - 1 || n < 5 || m < 5) throw std::invalid_argument(text);
    return {n, m};
  } catch (const std::exception&) {
    throw UsageError("--grid expects NxM with N, M >= 5, got '" + text + "'");
  }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    io::write_text(path, text);
}

std::string json_num(double x) { return std::isfinite(x) ? io::fmt(x) : "null"; }

// Minimal ordered JSON object writer with 17-digit numbers.
class Obj {
 public:
  Obj& num(const std::string& k, double v) { return raw(k, json_num(v)); }
  Obj& boolean(const std::string& k, bool v) { return raw(k, v ? "true" : "false"); }
  Obj& str(const std::string& k, const std::string& v) { return raw(k, json(v).dump()); }
  Obj& obj(const std::string& k, const Obj& v) { return raw(k, v.text()); }
  Obj& raw(const std::string& k, const std::string& v) {
    fields_.emplace_back(k, v);
    return *this;
  }
  std::string text() const {
    std::string s = "{";
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      if (i) s += ", ";
      s += json(fields_[i].first).dump() + ": " + fields_[i].second;
    }
    return s + "}";
  }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

// Rectangular lattice from an x,y,u table (any row order).
graphflow::GraphFunction graph_from_table(const io::Table& t) {
  const std::size_t cx = t.column("x"), cy = t.column("y"), cu = t.column("u");
  std::vector<double> xs, ys;
  for (const auto& r : t.rows) {
    xs.push_back(r[cx]);
    ys.push_back(r[cy]);
  }
  auto axis = [](std::vector<double> v, const char* name) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() < 5) throw InvalidInput(std::string("grid needs at least 5 distinct ") + name + " values");
    const double h = (v.back() - v.front()) / (v.size() - 1);
    for (std::size_t k = 0; k < v.size(); ++k)
      if (std::abs(v[k] - (v.front() + k * h)) > 1e-9 * std::max(1.0, std::abs(v[k])))
        throw InvalidInput(std::string(name) + " values are not uniformly spaced");
    return std::pair{v.front(), std::pair{h, static_cast<int>(v.size())}};
  };
  const auto [x0, xs_] = axis(xs, "x");
  const auto [y0, ys_] = axis(ys, "y");
  graphflow::RectGrid g;
  g.x0 = x0;
  g.dx = xs_.first;
  g.nx = xs_.second;
  g.y0 = y0;
  g.dy = ys_.first;
  g.ny = ys_.second;
  if (t.rows.size() != g.size()) throw InvalidInput("x,y,u table does not cover a full rectangular lattice");
  std::vector<double> u(g.size(), std::numeric_limits<double>::quiet_NaN());
  for (const auto& r : t.rows) {
    const int i = static_cast<int>(std::lround((r[cx] - g.x0) / g.dx));
    const int j = static_cast<int>(std::lround((r[cy] - g.y0) / g.dy));
    u[g.index(i, j)] = r[cu];
  }
  for (double v : u)
    if (!std::isfinite(v)) throw InvalidInput("x,y,u table has duplicate or non-finite entries");
  return {g, std::move(u)};
}

io::Table graph_table(const graphflow::GraphFunction& f) {
  io::Table t{{"x", "y", "u"}, {}};
  for (int i = 0; i < f.grid.nx; ++i)
    for (int j = 0; j < f.grid.ny; ++j) t.rows.push_back({f.grid.x(i), f.grid.y(j), f.at(i, j)});
  return t;
}

// Density ratio over raw triangles (meshes without a grid header): a
// triangle counts when its centroid lies in the ball.
monotonicity::DensitySeries triangle_density(const io::ObjMesh& mesh, const Vec3& x0,
                                             const std::vector<double>& radii) {
  monotonicity::DensitySeries s;
  s.center = x0;
  s.radii = radii;
  std::vector<double> area(radii.size(), 0.0);
  std::map<std::pair<int, int>, int> edges;
  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices.at(tri[0]);
    const Vec3& b = mesh.vertices.at(tri[1]);
    const Vec3& c = mesh.vertices.at(tri[2]);
    const double A = 0.5 * (b - a).cross(c - a).norm();
    const double d2 = ((a + b + c) / 3.0 - x0).squaredNorm();
    for (std::size_t r = 0; r < radii.size(); ++r)
      if (d2 < radii[r] * radii[r]) area[r] += A;
    for (int e = 0; e < 3; ++e) {
      const int p = tri[e], q = tri[(e + 1) % 3];
      ++edges[{std::min(p, q), std::max(p, q)}];
    }
  }
  double dmin = std::numeric_limits<double>::infinity();
  for (const auto& [e, n] : edges)
    if (n == 1)
      for (int v : {e.first, e.second}) dmin = std::min(dmin, (mesh.vertices[v] - x0).norm());
  for (std::size_t r = 0; r < radii.size(); ++r) {
    s.values.push_back(area[r] / (kPi * radii[r] * radii[r]));
    s.clipped.push_back(radii[r] >= dmin);
  }
  return s;
}

// ---------------------------------------------------------------- config

std::string config_value(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return io::fmt(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + config_value(v[k], key);
    return s;
  }
  throw UsageError("config key '" + key + "' has an unsupported value " + v.dump());
}

// Applies the config object of the active subcommand chain to options that
// were not given on the command line.
void apply_config(const json& cfg, CLI::App& app) {
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  std::set<std::string> names;
  for (const auto* sub : app.get_subcommands({})) names.insert(sub->get_name());
  for (const auto& [key, val] : cfg.items())
    if (!names.count(key)) throw UsageError("unknown config key '" + key + "'");

  std::function<void(const json&, CLI::App*)> apply = [&](const json& node, CLI::App* sub) {
    if (!node.is_object()) throw UsageError("config section '" + sub->get_name() + "' must be an object");
    for (const auto& [key, val] : node.items()) {
      if (val.is_object()) {
        CLI::App* child = nullptr;
        try {
          child = sub->get_subcommand(key);
        } catch (const CLI::OptionNotFound&) {
        }
        if (!child) throw UsageError("unknown config key '" + sub->get_name() + "." + key + "'");
        if (child->parsed()) apply(val, child);
        continue;
      }
      CLI::Option* opt = sub->get_option_no_throw("--" + key);
      if (!opt) throw UsageError("unknown config key '" + sub->get_name() + "." + key + "'");
      if (opt->count() == 0) {
        opt->add_result(config_value(val, key));
        opt->run_callback();
      }
    }
  };
  for (auto* sub : app.get_subcommands())
    if (cfg.contains(sub->get_name())) apply(cfg.at(sub->get_name()), sub);
}

// ---------------------------------------------------------------- options

struct Options {
  // generate
  std::string preset, data_file, grid = "128x128", out, curvature_out;
  int quad_order = 8;
  double segments = 8;
  // solve / flow
  std::string boundary_file, init_file, trace_file, dt = "auto", gauss_center = "0,0,0";
  double tol = 1e-10, T = 0.1, T0 = std::numeric_limits<double>::quiet_NaN();
  int max_iter = 50, every = 1;
  // density
  std::string mesh, center = "0,0,0", radii;
  int supersample = 1;
  // decompose
  std::string model = "standard", sector = "1,64,-3.14159265358979,9.42477796076938";
  double a = 0, b = 0, c = 0, r = 1, shift = 1, perturbation = 0, r1 = 4, R = 4096, mu = 2;
  int nr = 385, per_turn = 256;
  // annulus
  std::string check, fn = "inv";
  double param = std::numeric_limits<double>::quiet_NaN(), delta = 0.1, Rout = 10, t = 1, eps = 0.1;
  double Rparam = std::numeric_limits<double>::quiet_NaN();
  int anr = 257, anth = 64;
  // spectra
  int n = 3, dmax = 10, k = 3;
  double p = std::numeric_limits<double>::quiet_NaN(), lambda = std::numeric_limits<double>::quiet_NaN();
  // width
  double W0 = 0, C = 1, Tw = std::numeric_limits<double>::quiet_NaN();
  int samples = 101;
  // verify
  std::string suite = "all", format = "json";
};

// ---------------------------------------------------------------- commands

int cmd_generate(const Options& o, std::ostream& out) {
  if (o.preset.empty() == o.data_file.empty()) throw UsageError("generate needs exactly one of --preset or --data");
  const auto data = o.preset.empty() ? weierstrass::data_from_json(io::read_text(o.data_file))
                                     : weierstrass::preset_data(o.preset);
  const auto [ns, nt] = parse_grid(o.grid);
  weierstrass::QuadOptions q;
  q.order = o.quad_order;
  q.segments_per_unit = o.segments;
  const auto patch = weierstrass::make_patch(data, {ns, nt}, q);
  if (o.out.empty()) throw UsageError("generate needs --out");
  io::write_obj(patch, o.out);
  const auto curv = geom::curvatures(patch);
  if (!o.curvature_out.empty()) io::write_csv(io::curvature_table(patch, curv), o.curvature_out);
  out << "vertices " << std::to_string(patch.points().size()) << "\nmax_abs_H " << io::fmt(curv.max_abs_H()) << "\n";
  return kExitOk;
}

int cmd_solve(const Options& o, std::ostream& out) {
  if (o.boundary_file.empty() || o.out.empty()) throw UsageError("solve needs --boundary and --out");
  const auto b = graph_from_table(io::read_csv(o.boundary_file));
  graphflow::SolveOptions so;
  so.tol = o.tol;
  so.max_iter = o.max_iter;
  const auto res = graphflow::solve_dirichlet(b, so);
  io::write_csv(graph_table(res.u), o.out);
  out << "iterations " << std::to_string(res.iterations) << "\nmax_residual " << io::fmt(graphflow::max_abs(graphflow::mse_residual(res.u)))
      << "\n";
  return kExitOk;
}

int cmd_flow(const Options& o, std::ostream& out) {
  if (o.init_file.empty() || o.trace_file.empty()) throw UsageError("flow needs --init and --trace");
  const auto u0 = graph_from_table(io::read_csv(o.init_file));
  double dt = 0;
  if (o.dt == "auto") {
    dt = 0.2 * std::pow(std::min(u0.grid.dx, u0.grid.dy), 2);
  } else {
    dt = parse_list(o.dt, 1, "--dt")[0];
  }
  graphflow::FlowOptions fo;
  fo.snapshot_every = o.every;
  const auto c = parse_list(o.gauss_center, 3, "--gauss-center");
  fo.gauss_center = Vec3(c[0], c[1], c[2]);
  fo.gauss_T0 = std::isnan(o.T0) ? o.T + 1.0 : o.T0;
  const auto trace = graphflow::mcf_flow(u0, o.T, dt, fo);
  io::Table t{{"t", "sup_du", "sup_A2", "gauss_density"}, {}};
  for (const auto& s : trace.snapshots) t.rows.push_back({s.t, s.sup_du, s.sup_A2, s.gauss_density});
  io::write_csv(t, o.trace_file);
  if (!o.out.empty()) io::write_csv(graph_table(trace.at(trace.snapshots.size() - 1)), o.out);
  out << "snapshots " << std::to_string(trace.snapshots.size()) << "\ndt " << io::fmt(dt) << "\n";
  return kExitOk;
}

int cmd_density(const Options& o, std::ostream& out) {
  if (o.mesh.empty() || o.radii.empty()) throw UsageError("density needs --mesh and --radii");
  const auto c = parse_list(o.center, 3, "--center");
  const Vec3 x0(c[0], c[1], c[2]);
  const auto radii = parse_list(o.radii, 0, "--radii");
  const auto mesh = io::read_obj(o.mesh);
  monotonicity::DensitySeries s;
  if (mesh.grid) {
    monotonicity::BallOptions bo;
    bo.supersample = o.supersample;
    s = monotonicity::density_ratio(mesh.to_patch(), x0, radii, bo);
  } else {
    for (std::size_t k = 1; k < radii.size(); ++k)
      if (!(radii[k] > radii[k - 1]) || !(radii[0] > 0)) throw InvalidInput("density: radii must be positive and increasing");
    s = triangle_density(mesh, x0, radii);
  }
  io::Table t{{"s", "theta", "clipped"}, {}};
  for (std::size_t k = 0; k < radii.size(); ++k) t.rows.push_back({radii[k], s.values[k], s.clipped[k] ? 1.0 : 0.0});
  emit(io::csv_text(t), o.out, out);
  if (!o.out.empty()) {
    out << "eps_quad " << io::fmt(s.eps_quad) << "\n";
    if (radii.size() > 1) out << "monotone_defect " << io::fmt(monotonicity::monotone_defect(s)) << "\n";
  }
  return kExitOk;
}

int cmd_decompose(const Options& o, std::ostream& out) {
  const auto sv = parse_list(o.sector, 4, "--sector");
  // Angles snap to the angular lattice, which is anchored at theta = 0.
  const double dth = kTwoPi / o.per_turn;
  multigraph::Sector sector{sv[0], sv[1], std::round(sv[2] / dth) * dth, std::round(sv[3] / dth) * dth};
  multigraph::ModelParams mp;
  mp.a = o.a;
  mp.b = o.b;
  mp.c = o.c;
  mp.r = o.r;
  mp.shift = o.shift;
  mp.perturbation = o.perturbation;
  const std::string model = o.model == "slab" ? "slab_arctan" : o.model == "catenoid" ? "catenoid_log" : o.model;
  const auto g = multigraph::build_model(model, mp, sector, o.nr, o.per_turn);
  const auto fit = multigraph::fit_standard_piece(g, o.r1, o.mu, o.R);
  const auto diag = multigraph::wantit_diagnostic(g, o.r1, o.mu * o.r1);
  const auto& n = fit.decomposition.norms;
  Obj norms;
  norms.num("g1", n.g1).num("g2", n.g2).num("g3", n.g3).num("representation", n.representation);
  Obj d;
  d.num("epsilon_wantit", diag.epsilon).num("separation_sign", diag.separation_sign);
  Obj j;
  j.num("a", fit.piece.a).num("b", fit.piece.b).num("c", fit.piece.c).num("misfit", fit.misfit);
  j.obj("residual_norms", norms).obj("diagnostics", d);
  emit(j.text() + "\n", o.out, out);
  return kExitOk;
}

int cmd_annulus(const Options& o, std::ostream& out) {
  if (o.check != "osc" && o.check != "energy" && o.check != "slit")
    throw UsageError("--check must be osc, energy or slit");
  const bool slit = o.check == "slit";
  const std::string fn = slit && o.fn == "inv" ? "slit_power" : o.fn;
  const double param = std::isnan(o.param) ? (fn == "slit_power" ? o.eps : 1.0) : o.param;
  const auto f = annulus::AnnulusFunction::sample(o.delta, o.Rout, o.anr, o.anth,
                                                  annulus::preset_function(fn, param, o.delta), slit);
  Obj j;
  j.str("check", o.check).str("fn", fn).num("param", param);
  bool holds = false;
  if (o.check == "osc") {
    const auto r = annulus::oscillation_check(f);
    holds = r.holds;
    j.num("eps_hat", r.eps_hat).num("center_re", r.center.center.real()).num("center_im", r.center.center.imag());
    j.num("radius", r.center.radius).num("radius_at_average", r.center.at_average).boolean("holds", holds);
  } else if (o.check == "energy") {
    const auto r = annulus::annulus_energy(f, std::isnan(o.Rparam) ? o.Rout : o.Rparam, o.t);
    holds = r.energy <= r.bound && r.boundary_grad2 <= r.pointwise_bound;
    j.num("t", o.t).num("energy", r.energy).num("bound", r.bound).num("boundary_grad2", r.boundary_grad2);
    j.num("boundary_radius", r.boundary_radius).num("pointwise_bound", r.pointwise_bound).boolean("holds", holds);
  } else {
    const auto r = annulus::slit_oscillation_check(f, o.eps);
    holds = r.holds;
    j.num("eps", o.eps).num("eps_a", r.eps_a).num("eps_b", r.eps_b).boolean("hypotheses_hold", r.hypotheses_hold);
    j.str("failing", r.failing).num("drift", r.drift).num("drift_bound", r.drift_bound);
    j.num("radius", r.center.radius).num("bound", r.bound).boolean("holds", holds);
  }
  emit(j.text() + "\n", o.out, out);
  return holds ? kExitOk : kExitAssertion;
}

int cmd_spectra_dims(const Options& o, std::ostream& out) {
  io::Table t{{"d", "dim"}, {}};
  for (int d = 0; d <= o.dmax; ++d)
    t.rows.push_back({double(d), double(spectra::dim_harmonic_poly(o.n, d).value)});
  emit(io::csv_text(t), o.out, out);
  return kExitOk;
}

int cmd_spectra_growth(const Options& o, std::ostream& out) {
  const double slope = spectra::growth_exponent_fit(o.n, o.dmax);
  out << io::fmt(slope) << "\n";
  return std::abs(slope - (o.n - 1)) <= 0.15 ? kExitOk : kExitAssertion;
}

int cmd_spectra_cone(const Options& o, std::ostream& out) {
  if (std::isnan(o.p) == std::isnan(o.lambda)) throw UsageError("spectra cone needs exactly one of --p or --lambda");
  if (!std::isnan(o.p))
    out << io::fmt(spectra::cone_eigenvalue(o.k, o.p).lambda) << "\n";
  else
    out << io::fmt(spectra::cone_degree(o.k, o.lambda)) << "\n";
  return kExitOk;
}

int cmd_width(const Options& o, std::ostream& out) {
  if (o.samples < 2) throw UsageError("--samples must be at least 2");
  const double T = std::isnan(o.Tw) ? ricci::extinction_bound(o.W0, o.C) : o.Tw;
  io::Table t{{"t", "W"}, {}};
  for (int k = 0; k < o.samples; ++k) {
    const double tk = T * k / (o.samples - 1);
    t.rows.push_back({tk, ricci::width_trajectory(o.W0, o.C, tk)});
  }
  emit(io::csv_text(t), o.out, out);
  return kExitOk;
}

int cmd_width_extinct(const Options& o, std::ostream& out) {
  out << io::fmt(ricci::extinction_bound(o.W0, o.C)) << "\n";
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.format != "json" && o.format != "csv") throw UsageError("--format must be json or csv");
  std::vector<acceptance::Criterion> crit;
  for (int k : acceptance::select(o.suite)) crit.push_back(acceptance::run(k));
  const auto entries = acceptance::flatten(crit);
  emit(o.format == "json" ? report::to_json(entries) : report::to_csv(entries), o.out, out);
  return report::all_pass(entries) ? kExitOk : kExitAssertion;
}

bool is_usage(const Error& e) {
  return dynamic_cast<const UsageError*>(&e) || dynamic_cast<const InvalidInput*>(&e) ||
         dynamic_cast<const UnknownPreset*>(&e) || dynamic_cast<const IoError*>(&e);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  // --config may appear anywhere; it is removed before CLI parsing.
  std::vector<std::string> args;
  std::string config_path;
  for (int k = 1; k < argc; ++k) {
    const std::string a = argv[k];
    if (a == "--config") {
      if (k + 1 >= argc) {
        err << "error: --config needs a file\n";
        return kExitUsage;
      }
      config_path = argv[++k];
    } else if (a.rfind("--config=", 0) == 0) {
      config_path = a.substr(9);
    } else {
      args.push_back(a);
    }
  }

  Options o;
  CLI::App app{"Minimal surface and curvature flow toolkit", "minsurf"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* gen = app.add_subcommand("generate", "Weierstrass patch to OBJ");
  gen->add_option("--preset", o.preset, "catenoid, helicoid or enneper");
  gen->add_option("--data", o.data_file, "JSON Weierstrass descriptor");
  gen->add_option("--grid", o.grid, "NxM parameter grid");
  gen->add_option("--out", o.out, "OBJ output path");
  gen->add_option("--curvature", o.curvature_out, "CSV curvature export s,t,x,y,z,H,K,A2");
  gen->add_option("--quad-order", o.quad_order, "Gauss-Legendre points per segment")->check(CLI::PositiveNumber);
  gen->add_option("--segments", o.segments, "segments per unit arclength")->check(CLI::PositiveNumber);

  auto* solve = app.add_subcommand("solve", "Dirichlet problem for the minimal surface equation");
  solve->add_option("--boundary", o.boundary_file, "CSV x,y,u on the full lattice (boundary values used)");
  solve->add_option("--out", o.out, "CSV x,y,u");
  solve->add_option("--tol", o.tol, "max interior residual")->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", o.max_iter, "Newton iterations")->check(CLI::PositiveNumber);

  auto* flow = app.add_subcommand("flow", "Graph mean curvature flow");
  flow->add_option("--init", o.init_file, "CSV x,y,u initial data");
  flow->add_option("--T", o.T, "final time")->check(CLI::NonNegativeNumber);
  flow->add_option("--dt", o.dt, "time step or 'auto' (0.2 min(dx, dy)^2)");
  flow->add_option("--trace", o.trace_file, "CSV t,sup_du,sup_A2,gauss_density");
  flow->add_option("--out", o.out, "CSV x,y,u at the final time");
  flow->add_option("--every", o.every, "steps between snapshots")->check(CLI::PositiveNumber);
  flow->add_option("--gauss-center", o.gauss_center, "x,y,z of the Gaussian density");
  flow->add_option("--T0", o.T0, "reference time of the Gaussian density (default T + 1)");

  auto* dens = app.add_subcommand("density", "Density ratios of a mesh");
  dens->add_option("--mesh", o.mesh, "OBJ mesh");
  dens->add_option("--center", o.center, "x,y,z");
  dens->add_option("--radii", o.radii, "increasing radii s1,s2,...");
  dens->add_option("--out", o.out, "CSV s,theta,clipped");
  dens->add_option("--supersample", o.supersample, "sub-cells per cell side")->check(CLI::PositiveNumber);

  auto* dec = app.add_subcommand("decompose", "Catenoid/helicoid decomposition of a multi-valued graph");
  dec->add_option("--model", o.model, "standard, helicoid, catenoid, slab");
  dec->add_option("--sector", o.sector, "r1,r2,theta1,theta2");
  dec->add_option("--r1", o.r1, "inner scale")->check(CLI::PositiveNumber);
  dec->add_option("--R", o.R, "outer scale")->check(CLI::PositiveNumber);
  dec->add_option("--mu", o.mu, "fit sector S_{r1, mu r1}")->check(CLI::PositiveNumber);
  dec->add_option("--a", o.a);
  dec->add_option("--b", o.b);
  dec->add_option("--c", o.c);
  dec->add_option("--r", o.r, "scale of the standard piece")->check(CLI::PositiveNumber);
  dec->add_option("--shift", o.shift, "slab model shift");
  dec->add_option("--perturbation", o.perturbation, "amplitude of rho^{-1/2} sin(theta)");
  dec->add_option("--nr", o.nr, "radial nodes")->check(CLI::PositiveNumber);
  dec->add_option("--per-turn", o.per_turn, "angular cells per turn")->check(CLI::PositiveNumber);
  dec->add_option("--out", o.out, "JSON output");

  auto* ann = app.add_subcommand("annulus", "Oscillation and energy checks on an annulus");
  ann->add_option("--check", o.check, "osc, energy or slit");
  ann->add_option("--fn", o.fn, "const, inv, z, z2, zplus3, harmonic_log, helicoid_gradient, slit_power");
  ann->add_option("--param", o.param, "function parameter (default 1, or --eps for slit_power)");
  ann->add_option("--delta", o.delta, "inner radius")->check(CLI::PositiveNumber);
  ann->add_option("--R", o.Rout, "outer radius")->check(CLI::PositiveNumber);
  ann->add_option("--nr", o.anr, "radial nodes")->check(CLI::PositiveNumber);
  ann->add_option("--nth", o.anth, "angular cells")->check(CLI::PositiveNumber);
  ann->add_option("--t", o.t, "energy window half-width in log radius")->check(CLI::PositiveNumber);
  ann->add_option("--Rparam", o.Rparam, "energy window center sqrt(Rparam) (default R)")->check(CLI::PositiveNumber);
  ann->add_option("--eps", o.eps, "slit exponent")->check(CLI::PositiveNumber);
  ann->add_option("--out", o.out, "JSON report");

  auto* spectra_cmd = app.add_subcommand("spectra", "Harmonic polynomial dimensions and cone eigenvalues");
  spectra_cmd->require_subcommand(1);
  auto* dims = spectra_cmd->add_subcommand("dims", "CSV d,dim");
  dims->add_option("--n", o.n, "ambient dimension")->check(CLI::PositiveNumber);
  dims->add_option("--dmax", o.dmax, "largest degree")->check(CLI::NonNegativeNumber);
  dims->add_option("--out", o.out, "CSV output");
  auto* growth = spectra_cmd->add_subcommand("growth", "fitted growth exponent");
  growth->add_option("--n", o.n, "ambient dimension")->check(CLI::PositiveNumber);
  growth->add_option("--dmax", o.dmax, "largest degree")->check(CLI::NonNegativeNumber);
  auto* cone = spectra_cmd->add_subcommand("cone", "p -> lambda or lambda -> p");
  cone->add_option("--k", o.k, "cone dimension");
  cone->add_option("--p", o.p, "homogeneity degree");
  cone->add_option("--lambda", o.lambda, "eigenvalue");

  auto* width = app.add_subcommand("width", "Width trajectory under the equality ODE");
  width->add_option("--W0", o.W0, "initial width")->check(CLI::NonNegativeNumber);
  width->add_option("--C", o.C, "time offset")->check(CLI::PositiveNumber);
  width->add_option("--T", o.Tw, "final time (default: extinction)")->check(CLI::NonNegativeNumber);
  width->add_option("--samples", o.samples, "number of samples");
  width->add_option("--out", o.out, "CSV t,W");
  auto* extinct = width->add_subcommand("extinct", "print the extinction time");
  extinct->add_option("--W0", o.W0, "initial width")->check(CLI::NonNegativeNumber);
  extinct->add_option("--C", o.C, "time offset")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--suite", o.suite, "'all' or a list of criteria, e.g. 1,4,12");
  verify->add_option("--format", o.format, "json or csv");
  verify->add_option("--out", o.out, "report path (default stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (!config_path.empty()) {
      json cfg;
      try {
        cfg = json::parse(io::read_text(config_path));
      } catch (const json::exception& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
      }
      try {
        apply_config(cfg, app);
      } catch (const CLI::Error& e) {
        throw UsageError(std::string("config: ") + e.what());
      }
    }
    if (gen->parsed()) return cmd_generate(o, out);
    if (solve->parsed()) return cmd_solve(o, out);
    if (flow->parsed()) return cmd_flow(o, out);
    if (dens->parsed()) return cmd_density(o, out);
    if (dec->parsed()) return cmd_decompose(o, out);
    if (ann->parsed()) return cmd_annulus(o, out);
    if (dims->parsed()) return cmd_spectra_dims(o, out);
    if (growth->parsed()) return cmd_spectra_growth(o, out);
    if (cone->parsed()) return cmd_spectra_cone(o, out);
    if (extinct->parsed()) return cmd_width_extinct(o, out);
    if (width->parsed()) return cmd_width(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    err << "error: no subcommand\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return is_usage(e) ? kExitUsage : kExitAssertion;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitAssertion;
  }
}

}  // namespace minsurf::cli
