#include "enrich/mesh.hpp"

#include <cmath>

#include "enrich/errors.hpp"

namespace enrich {

std::uint32_t Mesh::add_group(const std::string& name) {
  for (std::size_t i = 0; i < group_names.size(); ++i)
    if (group_names[i] == name) return static_cast<std::uint32_t>(i);
  group_names.push_back(name);
  return static_cast<std::uint32_t>(group_names.size() - 1);
}

void Mesh::validate() const {
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (std::abs(normals[i].norm() - 1.0) > 1e-6)
      throw ConfigError("mesh normal " + std::to_string(i) + " is not unit length");
  }
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const Triangle& tri = triangles[t];
    for (const Corner& c : tri.corners) {
      if (c.position >= positions.size() || c.normal >= normals.size() || c.uv >= uvs.size())
        throw ConfigError("mesh triangle " + std::to_string(t) + " has an index out of range");
    }
    if (tri.group >= group_names.size())
      throw ConfigError("mesh triangle " + std::to_string(t) + " has no surface group");
  }
}

Vec3 AffineTransform::apply_normal(const Vec3& n) const {
  // (R S)^-T = R S^-1 for a rotation R and diagonal S.
  const Vec3 m = rotation * n.cwiseQuotient(scale);
  return m.normalized();
}

void AffineTransform::validate() const {
  if ((scale.array() <= 0.0).any()) throw ConfigError("transform scale must be positive");
  if (!(rotation.transpose() * rotation).isApprox(Mat3::Identity(), 1e-6) ||
      std::abs(rotation.determinant() - 1.0) > 1e-6)
    throw ConfigError("transform rotation is not a proper rotation");
}

Mesh apply_transform(const Mesh& mesh, const AffineTransform& t) {
  Mesh out = mesh;
  for (Vec3& p : out.positions) p = t.apply_point(p);
  for (Vec3& n : out.normals) n = t.apply_normal(n);
  return out;
}

Mat3 rotation_from_quaternion(const std::array<double, 4>& q) {
  Eigen::Quaterniond quat(q[0], q[1], q[2], q[3]);
  quat.normalize();
  return quat.toRotationMatrix();
}

}  // namespace enrich
