#include <doctest.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <initializer_list>
#include <filesystem>
#include <locale>
#include <sstream>

#include "minsurf/common.hpp"
#include "minsurf/errors.hpp"
#include "minsurf/io.hpp"
#include "minsurf/report.hpp"
#include "minsurf/surfaces.hpp"

using namespace minsurf;

namespace {

// Decimal comma and digit grouping, to catch locale leaks.
struct CommaPunct : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

struct LocaleGuard {
  std::locale old = std::locale::global(std::locale(std::locale::classic(), new CommaPunct));
  ~LocaleGuard() { std::locale::global(old); }
};

int count_lines(const std::string& text, const std::string& prefix) {
  std::istringstream is(text);
  std::string line;
  int n = 0;
  while (std::getline(is, line))
    if (line.rfind(prefix, 0) == 0) ++n;
  return n;
}

}  // namespace

TEST_CASE("number formatting") {
  LocaleGuard guard;
  CHECK(io::fmt(0.1) == "0.10000000000000001");
  CHECK(io::fmt(1234567.0) == "1234567");
  CHECK(io::fmt(-2.5e-300) == "-2.5e-300");
  CHECK(io::fmt(1 / 3.0) == "0.33333333333333331");
  for (double x : {kPi, 1 / 3.0, 6.02214076e23, -1e-320, 1e300}) {
    const std::string s = io::fmt(x);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
}

TEST_CASE("OBJ export") {
  LocaleGuard guard;
  const auto p = surfaces::plane(0, 1, 0, 1, 5, 5);
  const std::string text = io::obj_text(p);
  CHECK(count_lines(text, "v ") == 25);
  CHECK(count_lines(text, "vn ") == 25);
  CHECK(count_lines(text, "f ") == 32);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.find("f 1//1 ") != std::string::npos);

  const auto h = surfaces::helicoid(-1, 1, 0.1, 2.3, 64, 64);
  const auto mesh = io::parse_obj(io::obj_text(h));
  REQUIRE(mesh.grid);
  CHECK(mesh.vertices.size() == 4096);
  CHECK(mesh.triangles.size() == 2 * 63 * 63);
  for (std::size_t k = 0; k < mesh.vertices.size(); ++k) CHECK(mesh.vertices[k] == h.points()[k]);
  const auto back = mesh.to_patch();
  CHECK(back.grid().ds == h.grid().ds);
  CHECK(back.grid().t0 == h.grid().t0);
  CHECK(io::obj_text(back) == io::obj_text(h));

  const auto cat = surfaces::catenoid(-1, 1, 9, 12);
  const auto cm = io::parse_obj(io::obj_text(cat));
  CHECK(cm.triangles.size() == 2 * 8 * 12);
  CHECK(cm.to_patch().grid().periodic_t);

  CHECK_THROWS_AS(io::parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n").to_patch(), IoError);
  CHECK_THROWS_AS(io::parse_obj("v 0 0\n"), IoError);
  CHECK_THROWS_AS(io::parse_obj("v 0 0 0\nf 1 2 7\n"), IoError);
  CHECK_THROWS_AS(io::read_obj("/nonexistent/dir/x.obj"), IoError);
}

TEST_CASE("CSV round trip") {
  LocaleGuard guard;
  io::Table t{{"x", "y", "u"}, {{0.1, -2, 1e-300}, {kPi, 1e6, -0.0}}};
  const std::string text = io::csv_text(t);
  CHECK(text.rfind("x,y,u\n0.10000000000000001,-2,", 0) == 0);
  const auto back = io::parse_csv(text);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.column("u") == 2);
  CHECK_THROWS_AS(back.column("z"), IoError);
  CHECK_THROWS_AS(io::parse_csv("a,b\n1\n"), IoError);
  CHECK_THROWS_AS(io::parse_csv("a,b\n1,zz\n"), IoError);
  CHECK(io::parse_csv("a\r\n1.5\r\n").rows.at(0).at(0) == 1.5);

  const auto path = (std::filesystem::temp_directory_path() / "minsurf_io_test.csv").string();
  io::write_csv(t, path);
  CHECK(io::read_csv(path).rows == t.rows);
  std::filesystem::remove(path);
}

TEST_CASE("curvature export") {
  const auto p = surfaces::sphere(2, 0.5, 2.5, 21, 24);
  const auto t = io::curvature_table(p, geom::curvatures(p));
  CHECK(t.header == std::vector<std::string>{"s", "t", "x", "y", "z", "H", "K", "A2"});
  CHECK(t.rows.size() == 17 * 24);
  for (const auto& r : t.rows) CHECK(r[5] == doctest::Approx(1.0).epsilon(2e-2));
}

TEST_CASE("reports") {
  CHECK(report::to_json({}) == "[]\n");
  CHECK(report::all_pass({}));
  const std::vector<report::Entry> e = {{"1.a", "a \"quoted\" property", 0.5, 1, true},
                                        {"1.b", "b", std::nan(""), 1, false}};
  const std::string j = report::to_json(e);
  CHECK(j.find("\"id\": \"1.a\"") != std::string::npos);
  CHECK(j.find("a \\\"quoted\\\" property") != std::string::npos);
  CHECK(j.find("\"measured\": null") != std::string::npos);
  CHECK(j.find("\"pass\": false") != std::string::npos);
  CHECK_FALSE(report::all_pass(e));
  const std::string c = report::to_csv(e);
  CHECK(c.rfind("id,paper_ref,measured,threshold,pass\n", 0) == 0);
  CHECK(count_lines(c, "1.") == 2);
}
