#include "enrich/scene_geometry.hpp"

#include <cmath>
#include <unordered_map>

#include "enrich/errors.hpp"
#include "enrich/random.hpp"

namespace enrich {

namespace {
constexpr double kTotalIntensity = 1.6;
constexpr double kPointLightRadius = 0.5;
constexpr double kDirectionalConeRad = 0.03;
}  // namespace

std::vector<Light> make_lights(const LightRig& rig, const AugmentationParams& params) {
  const Vec3 aim(0.0, 0.0, 0.5 * params.bg_distance);
  std::vector<Light> lights;
  const double share = kTotalIntensity / std::max<std::size_t>(1, rig.positions.size());
  for (std::size_t i = 0; i < rig.positions.size(); ++i) {
    Light l;
    l.type = rig.light_type;
    l.position = rig.positions[i];
    l.direction = (aim - l.position).normalized();
    const Color base = i < rig.colors.size() ? rig.colors[i] : Color::Ones();
    if (l.type == LightType::Directional) {
      l.color = base * share;
      l.size = kDirectionalConeRad;
    } else {
      const double d = (aim - l.position).norm();
      l.color = base * (share * (1.0 + d * d));
      l.size = kPointLightRadius;
    }
    lights.push_back(l);
  }
  return lights;
}

SceneGeometry build_scene_geometry(const SceneSpec& scene, const AssetCatalog& catalog) {
  SceneGeometry geo;
  geo.bg_distance = scene.params_snapshot.bg_distance;
  geo.seed = scene.seed;
  geo.shadows = scene.shadows;
  geo.lights = make_lights(scene.lights, scene.params_snapshot);

  std::vector<TriangleVerts> occluders;
  for (std::size_t oi = 0; oi < scene.objects.size(); ++oi) {
    const ObjectInstance& obj = scene.objects[oi];
    const MeshEntry& entry = catalog.meshes()[catalog.mesh_index(obj.mesh_id)];
    const Mesh& src = entry.mesh;
    if (obj.surface_textures.size() != src.group_count() || obj.surface_reflection.size() != src.group_count())
      throw ConfigError("object " + std::to_string(oi) + " surface count does not match mesh " + obj.mesh_id);

    const auto surface_base = static_cast<std::uint32_t>(geo.surfaces.size());
    for (std::size_t g = 0; g < src.group_count(); ++g) {
      const TextureEntry& tex = catalog.textures()[catalog.texture_index(obj.surface_textures[g])];
      SurfaceShading s;
      s.material.reflection = obj.surface_reflection[g];
      if (s.material.reflection == ReflectionType::Diffuse) s.material.specular = 0.0;
      s.texture = std::make_shared<const Texture>(shift_texture_colors(tex.texture, obj.texture_rgb_shift));
      geo.surfaces.push_back(std::move(s));
    }

    const Mesh mesh = apply_transform(src, obj.transform());
    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
      const Triangle& t = mesh.triangles[ti];
      SceneTriangle st;
      for (int k = 0; k < 3; ++k) {
        st.p[k] = mesh.positions[t.corners[k].position];
        st.n[k] = mesh.normals[t.corners[k].normal];
        st.uv[k] = mesh.uvs[t.corners[k].uv];
      }
      st.plane_normal = (st.p[1] - st.p[0]).cross(st.p[2] - st.p[0]);
      st.plane_offset = st.plane_normal.dot(st.p[0]);
      st.object = static_cast<std::int32_t>(oi);
      st.local_index = static_cast<std::uint32_t>(ti);
      st.surface = surface_base + t.group;
      geo.triangles.push_back(st);
      occluders.push_back({st.p[0], st.p[1], st.p[2]});
    }
  }
  if (geo.shadows.enabled) geo.occluders = Bvh(std::move(occluders));
  return geo;
}

Color shade_surface(const SceneGeometry& geo, const SurfaceHit& hit, const Vec3& dir, std::uint64_t pixel_key) {
  const SceneTriangle& tri = geo.triangles[hit.triangle];
  const SurfaceShading& surf = geo.surfaces[tri.surface];
  const Vec3 point = dir * hit.depth;
  const Vec3 view = (-point).normalized();

  Vec2 uv = Vec2::Zero();
  Vec3 normal = Vec3::Zero();
  for (int k = 0; k < 3; ++k) {
    uv += hit.bary[k] * tri.uv[k];
    normal += hit.bary[k] * tri.n[k];
  }
  normal = normal.norm() > 0.0 ? Vec3(normal.normalized()) : Vec3(tri.plane_normal.normalized());
  Vec3 geometric = tri.plane_normal.normalized();
  // Two-sided: face both normals toward the viewer.
  if (geometric.dot(view) < 0.0) geometric = -geometric;
  if (normal.dot(view) < 0.0) normal = -normal;

  const Color albedo = surf.texture->sample(uv);
  std::array<double, 8> vis_storage{};
  std::vector<double> vis_heap;
  std::span<double> vis;
  if (geo.lights.size() <= vis_storage.size()) {
    vis = std::span<double>(vis_storage.data(), geo.lights.size());
  } else {
    vis_heap.resize(geo.lights.size());
    vis = vis_heap;
  }
  for (std::size_t i = 0; i < geo.lights.size(); ++i) {
    vis[i] = geo.shadows.enabled
                 ? shadow_visibility(point, geometric, geo.lights[i], geo.occluders, geo.shadows,
                                     mix64(pixel_key ^ (0x51ED27ULL * (i + 1))))
                 : 1.0;
  }
  return shade(surf.material, albedo, point, normal, view, geo.lights, vis);
}

}  // namespace enrich
