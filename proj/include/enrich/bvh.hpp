#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "enrich/mesh.hpp"

namespace enrich {

struct Ray {
  Vec3 origin;
  Vec3 direction;  // not necessarily unit length; t is measured in its units
};

struct TriangleVerts {
  Vec3 a, b, c;
};

struct RayHit {
  double t = 0.0;
  double b1 = 0.0, b2 = 0.0;  // barycentric weights of b and c
};

/// Moller-Trumbore, two-sided. Returns hits with t in (tmin, tmax).
std::optional<RayHit> intersect_triangle(const Ray& ray, const TriangleVerts& tri, double tmin = 0.0,
                                         double tmax = std::numeric_limits<double>::infinity());

/// Median-split bounding volume hierarchy answering occlusion queries.
class Bvh {
 public:
  Bvh() = default;
  explicit Bvh(std::vector<TriangleVerts> triangles);
  /// Single leaf holding every triangle: a linear scan, used as a reference.
  static Bvh flat(std::vector<TriangleVerts> triangles);

  /// True if any triangle is hit with t in (tmin, tmax).
  bool occluded(const Ray& ray, double tmin, double tmax) const;
  std::size_t size() const { return tris_.size(); }
  std::span<const TriangleVerts> triangles() const { return tris_; }

 private:
  struct Node {
    Eigen::AlignedBox3d box;
    std::uint32_t first = 0;  // leaf: first triangle; inner: right child index
    std::uint32_t count = 0;  // 0 for inner nodes
  };
  std::uint32_t build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids);

  std::vector<TriangleVerts> tris_;
  std::vector<Node> nodes_;
};

}  // namespace enrich
