#include "minsurf/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <locale>
#include <sstream>

#include "minsurf/errors.hpp"

namespace minsurf::io {

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view tok) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r'))
    tok.remove_suffix(1);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw IoError("cannot parse number '" + std::string(tok) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

Vec3 vertex_normal(const geom::ParamPatch& p, int i, int j) {
  const auto& g = p.grid();
  auto clamp_t = [&](int jj) { return g.periodic_t ? jj : std::clamp(jj, 0, g.nt - 1); };
  for (int di : {0, 1, -1}) {
    const int ii = std::clamp(i + di, 0, g.ns - 1);
    const Vec3 Xs = p.at(std::min(ii + 1, g.ns - 1), j) - p.at(std::max(ii - 1, 0), j);
    const Vec3 Xt = p.at(ii, clamp_t(j + 1)) - p.at(ii, clamp_t(j - 1));
    const Vec3 n = Xs.cross(Xt);
    if (n.norm() > 0.0) return n.normalized();
  }
  return Vec3::Zero();
}

}  // namespace

geom::ParamPatch ObjMesh::to_patch() const {
  if (!grid) throw IoError("OBJ file has no grid header; cannot rebuild a parameter patch");
  return geom::ParamPatch(*grid, vertices);
}

std::string obj_text(const geom::ParamPatch& patch) {
  const auto& g = patch.grid();
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "# minsurf-grid " << g.ns << ' ' << g.nt << ' ' << (g.periodic_t ? 1 : 0) << ' '
     << fmt(g.s0) << ' ' << fmt(g.ds) << ' ' << fmt(g.t0) << ' ' << fmt(g.dt) << '\n';
  for (const auto& p : patch.points())
    os << "v " << fmt(p.x()) << ' ' << fmt(p.y()) << ' ' << fmt(p.z()) << '\n';
  for (int i = 0; i < g.ns; ++i)
    for (int j = 0; j < g.nt; ++j) {
      const Vec3 n = vertex_normal(patch, i, j);
      os << "vn " << fmt(n.x()) << ' ' << fmt(n.y()) << ' ' << fmt(n.z()) << '\n';
    }
  for (int i = 0; i + 1 < g.ns; ++i)
    for (int j = 0; j < g.cells_t(); ++j) {
      const std::size_t a = g.index(i, j) + 1, b = g.index(i + 1, j) + 1,
                        c = g.index(i + 1, j + 1) + 1, d = g.index(i, j + 1) + 1;
      os << "f " << a << "//" << a << ' ' << b << "//" << b << ' ' << c << "//" << c << '\n';
      os << "f " << a << "//" << a << ' ' << c << "//" << c << ' ' << d << "//" << d << '\n';
    }
  return os.str();
}

void write_obj(const geom::ParamPatch& patch, const std::string& path) {
  write_text(path, obj_text(patch));
}

ObjMesh parse_obj(const std::string& text) {
  ObjMesh mesh;
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  std::string line;
  while (std::getline(is, line)) {
    const auto w = words(line);
    if (w.empty()) continue;
    if (w[0] == "#") {
      if (w.size() == 9 && w[1] == "minsurf-grid") {
        geom::ParamGrid g;
        g.ns = static_cast<int>(parse_double(w[2]));
        g.nt = static_cast<int>(parse_double(w[3]));
        g.periodic_t = parse_double(w[4]) != 0.0;
        g.s0 = parse_double(w[5]);
        g.ds = parse_double(w[6]);
        g.t0 = parse_double(w[7]);
        g.dt = parse_double(w[8]);
        mesh.grid = g;
      }
    } else if (w[0] == "v" || w[0] == "vn") {
      if (w.size() < 4) throw IoError("OBJ: short vertex record");
      Vec3 v(parse_double(w[1]), parse_double(w[2]), parse_double(w[3]));
      (w[0] == "v" ? mesh.vertices : mesh.normals).push_back(v);
    } else if (w[0] == "f") {
      std::vector<int> idx;
      for (std::size_t k = 1; k < w.size(); ++k) {
        const auto head = w[k].substr(0, w[k].find('/'));
        const long v = std::lround(parse_double(head));
        idx.push_back(static_cast<int>(v > 0 ? v - 1 : static_cast<long>(mesh.vertices.size()) + v));
      }
      for (std::size_t k = 2; k < idx.size(); ++k) mesh.triangles.push_back({idx[0], idx[k - 1], idx[k]});
    }
  }
  for (const auto& t : mesh.triangles)
    for (int v : t)
      if (v < 0 || v >= static_cast<int>(mesh.vertices.size()))
        throw IoError("OBJ: face index out of range");
  if (mesh.grid && mesh.grid->size() != mesh.vertices.size()) mesh.grid.reset();
  return mesh;
}

ObjMesh read_obj(const std::string& path) { return parse_obj(read_text(path)); }

std::size_t Table::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == name) return k;
  throw IoError("CSV: missing column '" + name + "'");
}

std::string csv_text(const Table& table) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  for (std::size_t k = 0; k < table.header.size(); ++k) os << (k ? "," : "") << table.header[k];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << fmt(row[k]);
    os << '\n';
  }
  return os.str();
}

void write_csv(const Table& table, const std::string& path) { write_text(path, csv_text(table)); }

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto cells = split(line, ',');
    if (first) {
      for (auto c : cells) {
        while (!c.empty() && c.front() == ' ') c.remove_prefix(1);
        while (!c.empty() && c.back() == ' ') c.remove_suffix(1);
        t.header.emplace_back(c);
      }
      first = false;
      continue;
    }
    if (cells.size() != t.header.size()) throw IoError("CSV: row width does not match header");
    std::vector<double> row;
    for (auto c : cells) row.push_back(parse_double(c));
    t.rows.push_back(std::move(row));
  }
  if (first) throw IoError("CSV: empty input");
  return t;
}

Table read_csv(const std::string& path) { return parse_csv(read_text(path)); }

Table curvature_table(const geom::ParamPatch& patch, const geom::CurvatureField& field) {
  const auto& g = patch.grid();
  Table t{{"s", "t", "x", "y", "z", "H", "K", "A2"}, {}};
  for (int i = 0; i < g.ns; ++i)
    for (int j = 0; j < g.nt; ++j) {
      const auto& c = field.nodes[g.index(i, j)];
      if (!c.valid) continue;
      const Vec3& p = patch.at(i, j);
      t.rows.push_back({g.s(i), g.t(j), p.x(), p.y(), p.z(), c.H, c.K, c.A2});
    }
  return t;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw IoError("write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace minsurf::io
