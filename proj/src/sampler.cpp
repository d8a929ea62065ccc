#include "enrich/sampler.hpp"

#include <cmath>

#include "enrich/errors.hpp"

namespace enrich {

LightRig sample_light_rig(const AugmentationParams& params, Rng& rng) {
  LightRig rig;
  rig.light_type = static_cast<LightType>(rng.uniform_int(0, 2));
  rig.count = static_cast<int>(rng.uniform_int(params.min_lights, params.max_lights));
  rig.is_colored = rng.bernoulli(params.p_colored_light);
  const double b = params.bg_distance;
  for (int i = 0; i < rig.count; ++i) {
    const double x = rng.uniform(-b, b);
    const double y = rng.uniform(-b, b);
    const double z = -rng.uniform(1.0, b);
    rig.positions.emplace_back(x, y, z);
    if (rig.is_colored) {
      Color c(rng.uniform(), rng.uniform(), rng.uniform());
      const double m = c.maxCoeff();
      rig.colors.push_back(m > 0.0 ? Color(c / m) : Color::Ones());
    } else {
      rig.colors.push_back(Color::Ones());
    }
  }
  return rig;
}

ObjectInstance sample_object_instance(const AugmentationParams& params, Rng& rng, const AssetCatalog& catalog,
                                      const PinholeCamera& camera) {
  if (catalog.empty()) throw ConfigError("asset catalog is empty");
  ObjectInstance obj;
  const auto& meshes = catalog.meshes();
  const auto& textures = catalog.textures();
  const MeshEntry& mesh = meshes[rng.uniform_int(0, static_cast<std::int64_t>(meshes.size()) - 1)];
  obj.mesh_id = mesh.id;
  for (std::size_t g = 0; g < mesh.mesh.group_count(); ++g) {
    obj.surface_textures.push_back(textures[rng.uniform_int(0, static_cast<std::int64_t>(textures.size()) - 1)].id);
    obj.surface_reflection.push_back(rng.bernoulli(0.5) ? ReflectionType::Standard : ReflectionType::Diffuse);
  }
  for (int k = 0; k < 3; ++k) obj.scale[k] = rng.uniform(params.scale_jitter.lo, params.scale_jitter.hi);
  obj.rotation = rng.unit_quaternion();

  const double m = params.placement_margin;
  const double sx = rng.uniform(-m, 1.0 + m) * camera.width;
  const double sy = rng.uniform(-m, 1.0 + m) * camera.height;
  const double z = rng.uniform(params.object_depth.lo, params.object_depth.hi);
  obj.translation = camera.unproject(Vec2(sx, sy), z);

  for (int k = 0; k < 3; ++k)
    obj.texture_rgb_shift[k] = static_cast<int>(rng.uniform_int(static_cast<std::int64_t>(std::ceil(params.texture_rgb_shift.lo)),
                                                                static_cast<std::int64_t>(std::floor(params.texture_rgb_shift.hi))));
  return obj;
}

SceneSpec sample_scene(const AugmentationParams& params, std::uint64_t seed, const AssetCatalog& catalog,
                       const PinholeCamera& camera) {
  params.validate();
  if (catalog.empty()) throw ConfigError("asset catalog is empty");
  Rng rng(seed);
  SceneSpec scene;
  scene.seed = seed;
  scene.params_snapshot = params;
  scene.catalog_fingerprint = catalog.fingerprint();

  const int count = static_cast<int>(rng.uniform_int(params.min_objects, params.max_objects));
  scene.lights = sample_light_rig(params, rng);
  scene.shadows.enabled = rng.bernoulli(params.p_shadows);
  scene.shadows.normal_bias = rng.uniform(params.shadow_normal_bias.lo, params.shadow_normal_bias.hi);
  scene.shadows.depth_bias = rng.uniform(params.shadow_depth_bias.lo, params.shadow_depth_bias.hi);
  scene.shadows.softness_samples = params.shadow_samples;
  for (int i = 0; i < count; ++i) scene.objects.push_back(sample_object_instance(params, rng, catalog, camera));
  return scene;
}

}  // namespace enrich
