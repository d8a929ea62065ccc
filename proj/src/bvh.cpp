#include "enrich/bvh.hpp"

#include <algorithm>
#include <numeric>

namespace enrich {

std::optional<RayHit> intersect_triangle(const Ray& ray, const TriangleVerts& tri, double tmin, double tmax) {
  const Vec3 e1 = tri.b - tri.a;
  const Vec3 e2 = tri.c - tri.a;
  const Vec3 p = ray.direction.cross(e2);
  const double det = e1.dot(p);
  if (det == 0.0) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = ray.origin - tri.a;
  const double u = s.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = s.cross(e1);
  const double v = ray.direction.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = e2.dot(q) * inv;
  if (!(t > tmin && t < tmax)) return std::nullopt;
  return RayHit{t, u, v};
}

namespace {

bool ray_box(const Ray& ray, const Vec3& inv_dir, const Eigen::AlignedBox3d& box, double tmin, double tmax) {
  for (int k = 0; k < 3; ++k) {
    double t0 = (box.min()[k] - ray.origin[k]) * inv_dir[k];
    double t1 = (box.max()[k] - ray.origin[k]) * inv_dir[k];
    if (t0 > t1) std::swap(t0, t1);
    // NaN from 0 * inf keeps the interval unchanged.
    if (t0 > tmin) tmin = t0;
    if (t1 < tmax) tmax = t1;
    if (tmin > tmax) return false;
  }
  return true;
}

constexpr std::uint32_t kLeafSize = 4;

}  // namespace

Bvh::Bvh(std::vector<TriangleVerts> triangles) : tris_(std::move(triangles)) {
  if (tris_.empty()) return;
  std::vector<Vec3> centroids(tris_.size());
  for (std::size_t i = 0; i < tris_.size(); ++i) centroids[i] = (tris_[i].a + tris_[i].b + tris_[i].c) / 3.0;
  nodes_.reserve(2 * tris_.size() / kLeafSize + 1);
  build(0, static_cast<std::uint32_t>(tris_.size()), centroids);
}

Bvh Bvh::flat(std::vector<TriangleVerts> triangles) {
  Bvh b;
  b.tris_ = std::move(triangles);
  if (b.tris_.empty()) return b;
  Node root;
  root.box = Eigen::AlignedBox3d(Vec3::Constant(-std::numeric_limits<double>::infinity()),
                                 Vec3::Constant(std::numeric_limits<double>::infinity()));
  root.first = 0;
  root.count = static_cast<std::uint32_t>(b.tris_.size());
  b.nodes_.push_back(root);
  return b;
}

std::uint32_t Bvh::build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({});
  Eigen::AlignedBox3d box;
  Eigen::AlignedBox3d cbox;
  for (std::uint32_t i = begin; i < end; ++i) {
    box.extend(tris_[i].a).extend(tris_[i].b).extend(tris_[i].c);
    cbox.extend(centroids[i]);
  }
  const Vec3 pad = Vec3::Constant(1e-9 * (1.0 + box.max().cwiseAbs().maxCoeff() + box.min().cwiseAbs().maxCoeff()));
  box.min() -= pad;
  box.max() += pad;
  nodes_[index].box = box;
  if (end - begin <= kLeafSize) {
    nodes_[index].first = begin;
    nodes_[index].count = end - begin;
    return index;
  }
  int axis = 0;
  cbox.sizes().maxCoeff(&axis);
  const std::uint32_t mid = begin + (end - begin) / 2;
  // Permute triangles and centroids together around the median centroid.
  std::vector<std::uint32_t> order(end - begin);
  std::iota(order.begin(), order.end(), begin);
  std::nth_element(order.begin(), order.begin() + (mid - begin), order.end(),
                   [&](std::uint32_t l, std::uint32_t r) {
                     if (centroids[l][axis] != centroids[r][axis]) return centroids[l][axis] < centroids[r][axis];
                     return l < r;
                   });
  std::vector<TriangleVerts> t(order.size());
  std::vector<Vec3> c(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    t[i] = tris_[order[i]];
    c[i] = centroids[order[i]];
  }
  std::copy(t.begin(), t.end(), tris_.begin() + begin);
  std::copy(c.begin(), c.end(), centroids.begin() + begin);

  build(begin, mid, centroids);
  const std::uint32_t right = build(mid, end, centroids);
  nodes_[index].first = right;
  nodes_[index].count = 0;
  return index;
}

bool Bvh::occluded(const Ray& ray, double tmin, double tmax) const {
  if (nodes_.empty()) return false;
  const Vec3 inv_dir = ray.direction.cwiseInverse();
  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const std::uint32_t ni = stack[--top];
    const Node& node = nodes_[ni];
    if (!ray_box(ray, inv_dir, node.box, tmin, tmax)) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i)
        if (intersect_triangle(ray, tris_[i], tmin, tmax)) return true;
    } else {
      stack[top++] = ni + 1;
      stack[top++] = node.first;
    }
  }
  return false;
}

}  // namespace enrich
