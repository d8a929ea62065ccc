#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace enrich {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// One triangle corner: independent indices into positions, normals and uvs,
/// the same layout Wavefront OBJ uses. Lets a box share 8 corner positions
/// while each face keeps its own flat normal.
struct Corner {
  std::uint32_t position = 0;
  std::uint32_t normal = 0;
  std::uint32_t uv = 0;
  bool operator==(const Corner&) const = default;
};

struct Triangle {
  std::array<Corner, 3> corners;
  /// Index into Mesh::group_names.
  std::uint32_t group = 0;
  bool operator==(const Triangle&) const = default;
};

/// Indexed triangle mesh partitioned into named surface groups. Each group
/// receives its own texture and reflection type when rendered.
struct Mesh {
  std::vector<Vec3> positions;
  std::vector<Vec3> normals;
  std::vector<Vec2> uvs;
  std::vector<Triangle> triangles;
  std::vector<std::string> group_names;

  std::size_t group_count() const { return group_names.size(); }
  std::uint32_t add_group(const std::string& name);

  /// Throws ConfigError describing the first violated invariant
  /// (index range, unit normals, group membership).
  void validate() const;
};

/// Scale, then rotate, then translate.
struct AffineTransform {
  Vec3 scale = Vec3::Ones();
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply_point(const Vec3& p) const { return rotation * scale.cwiseProduct(p) + translation; }
  /// Inverse-transpose of the linear part applied to n, renormalized.
  Vec3 apply_normal(const Vec3& n) const;
  void validate() const;
};

Mesh apply_transform(const Mesh& mesh, const AffineTransform& t);

/// Rotation matrix from a (w, x, y, z) quaternion; normalizes the input.
Mat3 rotation_from_quaternion(const std::array<double, 4>& q);

}  // namespace enrich
