#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "enrich/bvh.hpp"
#include "enrich/camera.hpp"
#include "enrich/catalog.hpp"
#include "enrich/scene_spec.hpp"
#include "enrich/shading.hpp"

namespace enrich {

/// Camera-frame triangle with everything the visibility and shading passes need.
struct SceneTriangle {
  std::array<Vec3, 3> p;
  std::array<Vec3, 3> n;
  std::array<Vec2, 3> uv;
  /// Unnormalized plane normal (p1-p0)x(p2-p0) and its offset with p0.
  Vec3 plane_normal;
  double plane_offset = 0.0;
  std::int32_t object = 0;
  std::uint32_t local_index = 0;  // triangle index within its object
  std::uint32_t surface = 0;      // global surface slot
};

struct SurfaceShading {
  Material material;
  std::shared_ptr<const Texture> texture;
};

/// Planar depth where the ray through `dir` (z = 1) meets the triangle's
/// plane. The rasterizer and the ray-cast reference both call this, so
/// their depths agree bit for bit for the same (triangle, pixel).
inline double plane_depth(const SceneTriangle& tri, const Vec3& dir) {
  return tri.plane_offset / tri.plane_normal.dot(dir);
}

/// Lights derived from a LightRig. Directional and spot lights aim at the
/// middle of the object volume; intensities are split over the rig and
/// point/spot lights are boosted to unit falloff at that aim point.
std::vector<Light> make_lights(const LightRig& rig, const AugmentationParams& params);

/// Everything a render pass reads, instantiated once per scene.
struct SceneGeometry {
  std::vector<SceneTriangle> triangles;  // ordered by (object, local index)
  std::vector<SurfaceShading> surfaces;
  std::vector<Light> lights;
  ShadowConfig shadows;
  Bvh occluders;
  double bg_distance = 21.0;
  std::uint64_t seed = 0;
};

/// Transforms every object into the camera frame and resolves textures and
/// materials from the catalog. Throws ConfigError on unknown ids or a
/// surface count that does not match the mesh.
SceneGeometry build_scene_geometry(const SceneSpec& scene, const AssetCatalog& catalog);

/// Surface point, perspective-correct attributes already resolved.
struct SurfaceHit {
  std::uint32_t triangle = 0;
  double depth = 0.0;
  std::array<double, 3> bary{1.0, 0.0, 0.0};
};

/// Shades one visible surface point. `dir` is the z = 1 pixel ray and
/// `pixel_key` seeds shadow jitter for that pixel.
Color shade_surface(const SceneGeometry& geo, const SurfaceHit& hit, const Vec3& dir, std::uint64_t pixel_key);

}  // namespace enrich
