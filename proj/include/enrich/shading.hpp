#pragma once

#include <cstdint>
#include <span>

#include "enrich/bvh.hpp"
#include "enrich/texture.hpp"

namespace enrich {

enum class ReflectionType { Standard, Diffuse };
enum class LightType { Directional, Point, Spot };

std::string_view to_string(ReflectionType r);
std::string_view to_string(LightType t);
ReflectionType reflection_from_string(std::string_view s);
LightType light_type_from_string(std::string_view s);

struct Material {
  ReflectionType reflection = ReflectionType::Diffuse;
  double ambient = 0.15;
  /// Blinn-Phong terms, used by Standard only.
  double specular = 0.35;
  double shininess = 32.0;

  void validate() const;
};

struct Light {
  LightType type = LightType::Directional;
  Vec3 position = Vec3::Zero();
  /// Unit direction the light travels (directional) or the spot axis.
  Vec3 direction = Vec3(0, 0, 1);
  Color color = Color::Ones();
  double spot_inner_deg = 30.0;
  double spot_outer_deg = 45.0;
  /// Soft-shadow extent: disc radius for point/spot lights, cone half-angle
  /// in radians for directional lights.
  double size = 0.0;

  void validate() const;
};

/// Shadow ray parameters.
struct ShadowConfig {
  bool enabled = false;
  double normal_bias = 0.02;
  double depth_bias = 0.02;
  int softness_samples = 4;

  void validate() const;
};

/// Unit vector toward the light and the distance falloff (times the spot
/// cone factor) at `point`. Point and spot lights use 1/(1+d^2).
struct LightSample {
  Vec3 to_light;
  double attenuation = 1.0;
  double distance = 0.0;  // +inf for directional lights
};
LightSample light_at(const Light& light, const Vec3& point);

/// Ambient plus per-light Lambert (and Blinn-Phong specular for Standard)
/// terms, each scaled by the light's visibility; not clamped.
Color shade_unclamped(const Material& material, const Color& albedo, const Vec3& point, const Vec3& normal,
                      const Vec3& view_dir, std::span<const Light> lights, std::span<const double> visibility);

/// shade_unclamped clamped to [0,1]^3. `visibility` may be empty (all lit).
Color shade(const Material& material, const Color& albedo, const Vec3& point, const Vec3& normal,
            const Vec3& view_dir, std::span<const Light> lights, std::span<const double> visibility);

/// Fraction of jittered shadow rays from point + normal_bias * normal toward
/// the light that reach it. A hit occludes only when nearer than the ray
/// length minus depth_bias. Jitter comes from a stateless hash of
/// (key, sample), so results do not depend on evaluation order.
double shadow_visibility(const Vec3& point, const Vec3& normal, const Light& light, const Bvh& occluders,
                         const ShadowConfig& cfg, std::uint64_t key);

}  // namespace enrich
