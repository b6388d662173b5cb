#include "minsurf/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include <Eigen/Eigenvalues>

#include "minsurf/errors.hpp"

namespace minsurf::hull {

namespace {

struct Face {
  std::array<int, 3> v;
  Vec3 n;
  double offset;
  bool alive = true;
};

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

ConvexHull::ConvexHull(const std::vector<Vec3>& pts) {
  if (pts.size() < 3) throw InvalidInput("ConvexHull: need at least 3 points");
  Vec3 lo = pts.front(), hi = pts.front();
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
    centroid += p;
  }
  centroid /= static_cast<double>(pts.size());
  const double scale = std::max((hi - lo).norm(), 1e-300);
  tol_ = 1e-10 * scale;

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) cov += (p - centroid) * (p - centroid).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  const Vec3 normal = es.eigenvectors().col(0);
  double thickness = 0.0;
  for (const auto& p : pts) thickness = std::max(thickness, std::abs((p - centroid).dot(normal)));

  origin_ = centroid;
  plane_normal_ = normal;
  axis_u_ = es.eigenvectors().col(2);
  axis_v_ = plane_normal_.cross(axis_u_);
  if (thickness <= 1e-9 * scale) {
    planar_ = true;
    build_planar(pts);
  } else {
    build_3d(pts);
  }
}

void ConvexHull::build_planar(const std::vector<Vec3>& pts) {
  std::vector<Eigen::Vector2d> q;
  q.reserve(pts.size());
  for (const auto& p : pts) q.emplace_back((p - origin_).dot(axis_u_), (p - origin_).dot(axis_v_));
  std::sort(q.begin(), q.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  std::vector<Eigen::Vector2d> h(2 * q.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], q[i]) <= 0) --k;
    h[k++] = q[i];
  }
  for (std::size_t i = q.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 2], h[k - 1], q[i]) <= 0) --k;
    h[k++] = q[i];
  }
  h.resize(k - 1);
  if (h.size() < 3) throw InvalidInput("ConvexHull: boundary points are collinear");
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % h.size()];
    Eigen::Vector2d n(b.y() - a.y(), a.x() - b.x());  // outward for a ccw polygon
    n.normalize();
    edge_normals_.push_back(n);
    edges_.push_back(n.dot(a));
  }
}

void ConvexHull::build_3d(const std::vector<Vec3>& pts) {
  const int n = static_cast<int>(pts.size());
  // Initial tetrahedron from extreme points.
  int i0 = 0, i1 = 0;
  for (int i = 0; i < n; ++i)
    if (pts[i].x() < pts[i0].x()) i0 = i;
  for (int i = 0; i < n; ++i)
    if ((pts[i] - pts[i0]).norm() > (pts[i1] - pts[i0]).norm()) i1 = i;
  int i2 = -1;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = (pts[i1] - pts[i0]).cross(pts[i] - pts[i0]).norm();
    if (d > best) best = d, i2 = i;
  }
  int i3 = -1;
  best = 0.0;
  const Vec3 tri_n = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).normalized();
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(tri_n.dot(pts[i] - pts[i0]));
    if (d > best) best = d, i3 = i;
  }
  if (i2 < 0 || i3 < 0 || best <= tol_) {
    planar_ = true;
    build_planar(pts);
    return;
  }
  const Vec3 inside = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;

  std::vector<Face> faces;
  auto add_face = [&](int a, int b, int c) {
    Face f{{a, b, c}, Vec3::Zero(), 0.0};
    Vec3 nn = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
    const double len = nn.norm();
    if (len == 0.0) return;
    nn /= len;
    if (nn.dot(inside - pts[a]) > 0) {
      std::swap(f.v[1], f.v[2]);
      nn = -nn;
    }
    f.n = nn;
    f.offset = nn.dot(pts[a]);
    faces.push_back(f);
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<int> visible;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
      if (faces[f].alive && faces[f].n.dot(pts[p]) - faces[f].offset > tol_) visible.push_back(f);
    if (visible.empty()) continue;
    std::map<std::pair<int, int>, int> directed;
    for (int f : visible) {
      faces[f].alive = false;
      for (int e = 0; e < 3; ++e) directed[{faces[f].v[e], faces[f].v[(e + 1) % 3]}] += 1;
    }
    for (const auto& [edge, count] : directed) {
      if (directed.count({edge.second, edge.first})) continue;  // interior of the visible region
      const int a = edge.first, b = edge.second;
      Face f{{a, b, p}, Vec3::Zero(), 0.0};
      Vec3 nn = (pts[b] - pts[a]).cross(pts[p] - pts[a]);
      const double len = nn.norm();
      if (len == 0.0) continue;
      f.n = nn / len;
      f.offset = f.n.dot(pts[a]);
      faces.push_back(f);
    }
  }
  for (const auto& f : faces) {
    if (!f.alive) continue;
    normals_.push_back(f.n);
    offsets_.push_back(f.offset);
  }
}

double ConvexHull::violation(const Vec3& p) const {
  if (planar_) {
    const Vec3 d = p - origin_;
    const double perp = std::abs(d.dot(plane_normal_));
    const Eigen::Vector2d q(d.dot(axis_u_), d.dot(axis_v_));
    double out = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < edges_.size(); ++k)
      out = std::max(out, edge_normals_[k].dot(q) - edges_[k]);
    if (out <= 0.0) return perp;
    return std::hypot(perp, out);
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < normals_.size(); ++k)
    worst = std::max(worst, normals_[k].dot(p) - offsets_[k]);
  return worst;
}

}  // namespace minsurf::hull
