#pragma once

#include <cstdint>

#include "enrich/camera.hpp"
#include "enrich/catalog.hpp"
#include "enrich/random.hpp"
#include "enrich/scene_spec.hpp"

namespace enrich {

/// Light type uniform over the three kinds, count uniform on
/// [min_lights, max_lights], positions uniform in a box behind the camera
/// (|x|, |y| <= bg_distance, z in [-bg_distance, -1]). Colored rigs draw
/// independent per-channel brightness per light, rescaled to max channel 1.
LightRig sample_light_rig(const AugmentationParams& params, Rng& rng);

/// Mesh and per-surface textures and reflection types uniform; per-axis
/// scale uniform in scale_jitter; uniformly random rotation; center placed
/// through a uniform image position (with placement_margin overhang) at a
/// planar depth uniform in object_depth.
ObjectInstance sample_object_instance(const AugmentationParams& params, Rng& rng, const AssetCatalog& catalog,
                                      const PinholeCamera& camera);

/// Pure function of (params, seed, catalog, camera). Throws ConfigError on an
/// empty catalog or invalid params.
SceneSpec sample_scene(const AugmentationParams& params, std::uint64_t seed, const AssetCatalog& catalog,
                       const PinholeCamera& camera);

}  // namespace enrich
