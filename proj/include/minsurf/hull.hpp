#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "minsurf/common.hpp"

namespace minsurf::hull {

/// Convex hull of a point cloud in R^3, stored as supporting half-spaces.
/// Point sets that are coplanar within tolerance are handled as a planar
/// polygon in their best-fit plane.
class ConvexHull {
 public:
  explicit ConvexHull(const std::vector<Vec3>& points);

  /// Signed distance-like violation: positive when p lies outside the hull,
  /// negative (or zero for planar hulls) inside. For a 3-D hull this is
  /// max_k (n_k . p - a_k) over the facets.
  double violation(const Vec3& p) const;

  bool planar() const { return planar_; }
  std::size_t facet_count() const { return planar_ ? edges_.size() : normals_.size(); }

 private:
  void build_planar(const std::vector<Vec3>& pts);
  void build_3d(const std::vector<Vec3>& pts);

  bool planar_ = false;
  double tol_ = 0.0;
  // 3-D facets
  std::vector<Vec3> normals_;
  std::vector<double> offsets_;
  // planar hull
  Vec3 origin_ = Vec3::Zero();
  Vec3 axis_u_ = Vec3::UnitX(), axis_v_ = Vec3::UnitY(), plane_normal_ = Vec3::UnitZ();
  std::vector<Eigen::Vector2d> edge_normals_;
  std::vector<double> edges_;
};

}  // namespace minsurf::hull
