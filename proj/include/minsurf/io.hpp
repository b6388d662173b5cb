#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "minsurf/geomcore.hpp"

namespace minsurf::io {

/// 17 significant digits, independent of the global locale.
std::string fmt(double x);

/// Mesh read back from an OBJ file. When the file carries the grid header
/// written by write_obj, `grid` is set and the patch can be rebuilt.
struct ObjMesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<std::array<int, 3>> triangles;  // 0-based
  std::optional<geom::ParamGrid> grid;

  geom::ParamPatch to_patch() const;
};

/// Vertices, per-vertex normals and two triangles per cell, 1-based indices.
std::string obj_text(const geom::ParamPatch& patch);
void write_obj(const geom::ParamPatch& patch, const std::string& path);
ObjMesh parse_obj(const std::string& text);
ObjMesh read_obj(const std::string& path);

/// Numeric table with a header row.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

std::string csv_text(const Table& table);
void write_csv(const Table& table, const std::string& path);
Table parse_csv(const std::string& text);
Table read_csv(const std::string& path);

/// Curvature export with header s,t,x,y,z,H,K,A2 (valid nodes only).
Table curvature_table(const geom::ParamPatch& patch, const geom::CurvatureField& field);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace minsurf::io
