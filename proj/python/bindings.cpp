#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "minsurf/acceptance.hpp"
#include "minsurf/cli.hpp"
#include "minsurf/errors.hpp"
#include "minsurf/geomcore.hpp"
#include "minsurf/graphflow.hpp"
#include "minsurf/io.hpp"
#include "minsurf/ricciwidth.hpp"
#include "minsurf/spectra.hpp"
#include "minsurf/weierstrass.hpp"

namespace py = pybind11;
using namespace minsurf;

namespace {

const char* const kKinds[] = {
    "InvalidInput",     "DegenerateMetric",   "StepTooLarge",      "NotMinimal",
    "UnknownPreset",    "PathOutsideDomain",  "SingularityOnPath", "NoConvergence",
    "StabilityViolation", "BlowUp",           "PastExtinction",    "InsufficientDomain",
    "NotSubharmonic",   "BadSector",          "GridMisaligned",    "SignChange",
    "SectorTooSmall",   "NonFiniteSamples",   "OutOfRange",        "WindowOutOfRange",
    "HypothesisViolated", "NegativeEigenvalue", "ZeroField",       "BruteForceTooLarge",
    "UsageError",       "IoError"};

std::map<std::string, PyObject*>& error_types() {
  static std::map<std::string, PyObject*> types;
  return types;
}

// (ns, nt, 3) array of node positions.
py::array_t<double> points_array(const geom::ParamPatch& p) {
  const auto& g = p.grid();
  py::array_t<double> out({g.ns, g.nt, 3});
  auto a = out.mutable_unchecked<3>();
  for (int i = 0; i < g.ns; ++i)
    for (int j = 0; j < g.nt; ++j)
      for (int k = 0; k < 3; ++k) a(i, j, k) = p.at(i, j)[k];
  return out;
}

geom::ParamPatch patch_from(const std::string& preset, int ns, int nt) {
  return weierstrass::make_patch(weierstrass::preset_data(preset), {ns, nt});
}

py::dict curvature_dict(const geom::ParamPatch& p) {
  const auto field = geom::curvatures(p);
  const auto& g = field.grid;
  py::array_t<double> H({g.ns, g.nt}), K({g.ns, g.nt});
  py::array_t<bool> valid({g.ns, g.nt});
  auto h = H.mutable_unchecked<2>();
  auto k = K.mutable_unchecked<2>();
  auto v = valid.mutable_unchecked<2>();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < g.ns; ++i)
    for (int j = 0; j < g.nt; ++j) {
      const auto& c = field.nodes[g.index(i, j)];
      h(i, j) = c.valid ? c.H : nan;
      k(i, j) = c.valid ? c.K : nan;
      v(i, j) = c.valid;
    }
  py::dict d;
  d["H"] = H;
  d["K"] = K;
  d["valid"] = valid;
  d["max_abs_H"] = field.max_abs_H();
  return d;
}

py::list entries_list(const std::vector<report::Entry>& entries) {
  py::list out;
  for (const auto& e : entries) {
    py::dict d;
    d["id"] = e.id;
    d["paper_ref"] = e.paper_ref;
    d["measured"] = e.measured;
    d["threshold"] = e.threshold;
    d["pass"] = e.pass;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_minsurf, m) {
  m.doc() = "Numerical checks for minimal surfaces and curvature flows";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  for (const char* kind : kKinds) {
    PyObject* t = PyErr_NewException((std::string("minsurf.") + kind).c_str(), base.ptr(), nullptr);
    m.add_object(kind, py::reinterpret_steal<py::object>(t));
    error_types()[kind] = t;
  }
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const auto it = error_types().find(e.kind());
      PyErr_SetString(it != error_types().end() ? it->second : base.ptr(), e.what());
    }
  });

  m.def("preset_points", [](const std::string& preset, int ns, int nt) {
    return points_array(patch_from(preset, ns, nt));
  }, py::arg("preset"), py::arg("ns") = 128, py::arg("nt") = 128);

  m.def("preset_curvatures", [](const std::string& preset, int ns, int nt) {
    return curvature_dict(patch_from(preset, ns, nt));
  }, py::arg("preset"), py::arg("ns") = 128, py::arg("nt") = 128);

  m.def("preset_area", [](const std::string& preset, int ns, int nt) {
    return geom::patch_area(patch_from(preset, ns, nt));
  }, py::arg("preset"), py::arg("ns") = 128, py::arg("nt") = 128);

  m.def("preset_obj", [](const std::string& preset, int ns, int nt) {
    return io::obj_text(patch_from(preset, ns, nt));
  }, py::arg("preset"), py::arg("ns") = 128, py::arg("nt") = 128);

  m.def("immersion", [](const std::string& preset, std::complex<double> z) {
    const Vec3 x = weierstrass::integrate_immersion(weierstrass::preset_data(preset), z);
    return std::vector<double>{x[0], x[1], x[2]};
  }, py::arg("preset"), py::arg("z"));

  m.def("sphere_radius", [](double R, int n, double t) {
    const auto r = graphflow::sphere_radius(R, n, t);
    return py::make_tuple(r.closed_form, r.ode);
  }, py::arg("R"), py::arg("n"), py::arg("t"));

  m.def("scalar_lower_bound", &ricci::scalar_lower_bound, py::arg("minR0"), py::arg("n"), py::arg("t"));
  m.def("width_trajectory", &ricci::width_trajectory, py::arg("W0"), py::arg("C"), py::arg("t"));
  m.def("extinction_bound", &ricci::extinction_bound, py::arg("W0"), py::arg("C"));

  m.def("dim_harmonic_poly", [](int n, int d) { return spectra::dim_harmonic_poly(n, d).value; },
        py::arg("n"), py::arg("d"));
  m.def("cone_degree", &spectra::cone_degree, py::arg("k"), py::arg("lam"));
  m.def("sublevel_fraction", [](const std::vector<double>& f, double eps) {
    return spectra::sublevel_fraction(f, eps);
  }, py::arg("f"), py::arg("eps"));

  m.def("acceptance", [](int number) {
    const auto c = acceptance::run(number);
    py::dict d;
    d["number"] = c.number;
    d["title"] = c.title;
    d["pass"] = c.pass();
    d["checks"] = entries_list(c.checks);
    return d;
  }, py::arg("number"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<std::string> all{"minsurf"};
    all.insert(all.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : all) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
