#include "enrich/shading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "enrich/errors.hpp"
#include "enrich/random.hpp"

namespace enrich {

std::string_view to_string(ReflectionType r) { return r == ReflectionType::Standard ? "Standard" : "Diffuse"; }

std::string_view to_string(LightType t) {
  switch (t) {
    case LightType::Directional: return "Directional";
    case LightType::Point: return "Point";
    case LightType::Spot: return "Spot";
  }
  return "unknown";
}

ReflectionType reflection_from_string(std::string_view s) {
  if (s == "Standard") return ReflectionType::Standard;
  if (s == "Diffuse") return ReflectionType::Diffuse;
  throw ConfigError("unknown reflection type '" + std::string(s) + "'");
}

LightType light_type_from_string(std::string_view s) {
  if (s == "Directional") return LightType::Directional;
  if (s == "Point") return LightType::Point;
  if (s == "Spot") return LightType::Spot;
  throw ConfigError("unknown light type '" + std::string(s) + "'");
}

void Material::validate() const {
  if (ambient < 0 || ambient > 1 || specular < 0 || specular > 1)
    throw ConfigError("material coefficients must be in [0,1]");
  if (shininess < 1) throw ConfigError("shininess must be >= 1");
}

void Light::validate() const {
  if (std::abs(direction.norm() - 1.0) > 1e-9) throw ConfigError("light direction must be unit length");
  if (spot_outer_deg < spot_inner_deg) throw ConfigError("spot outer cone narrower than inner cone");
  if ((color.array() < 0.0).any() || size < 0.0) throw ConfigError("light color and size must be nonnegative");
}

void ShadowConfig::validate() const {
  if (normal_bias < 0 || depth_bias < 0) throw ConfigError("shadow biases must be nonnegative");
  if (softness_samples < 1) throw ConfigError("softness_samples must be >= 1");
}

LightSample light_at(const Light& light, const Vec3& point) {
  if (light.type == LightType::Directional)
    return {-light.direction, 1.0, std::numeric_limits<double>::infinity()};
  const Vec3 d = light.position - point;
  const double dist = d.norm();
  const Vec3 l = dist > 0.0 ? Vec3(d / dist) : Vec3(-light.direction);
  double att = 1.0 / (1.0 + dist * dist);
  if (light.type == LightType::Spot) {
    constexpr double kDeg = std::numbers::pi / 180.0;
    const double cos_inner = std::cos(light.spot_inner_deg * kDeg);
    const double cos_outer = std::cos(light.spot_outer_deg * kDeg);
    const double c = (-l).dot(light.direction);
    double cone = 0.0;
    if (c >= cos_inner) {
      cone = 1.0;
    } else if (c > cos_outer) {
      const double t = (c - cos_outer) / (cos_inner - cos_outer);
      cone = t * t * (3.0 - 2.0 * t);
    }
    att *= cone;
  }
  return {l, att, dist};
}

Color shade_unclamped(const Material& material, const Color& albedo, const Vec3& point, const Vec3& normal,
                      const Vec3& view_dir, std::span<const Light> lights, std::span<const double> visibility) {
  Color out = material.ambient * albedo;
  for (std::size_t i = 0; i < lights.size(); ++i) {
    const double vis = visibility.empty() ? 1.0 : visibility[i];
    if (vis <= 0.0) continue;
    const LightSample ls = light_at(lights[i], point);
    const double ndotl = normal.dot(ls.to_light);
    if (ndotl <= 0.0 || ls.attenuation <= 0.0) continue;
    const Color radiance = lights[i].color * (vis * ls.attenuation);
    out += albedo.cwiseProduct(radiance) * ndotl;
    if (material.reflection == ReflectionType::Standard) {
      const Vec3 h = (ls.to_light + view_dir).normalized();
      const double ndoth = std::max(0.0, normal.dot(h));
      out += radiance * (material.specular * std::pow(ndoth, material.shininess));
    }
  }
  return out;
}

Color shade(const Material& material, const Color& albedo, const Vec3& point, const Vec3& normal,
            const Vec3& view_dir, std::span<const Light> lights, std::span<const double> visibility) {
  return shade_unclamped(material, albedo, point, normal, view_dir, lights, visibility)
      .cwiseMax(0.0)
      .cwiseMin(1.0);
}

double shadow_visibility(const Vec3& point, const Vec3& normal, const Light& light, const Bvh& occluders,
                         const ShadowConfig& cfg, std::uint64_t key) {
  if (!cfg.enabled || occluders.size() == 0) return 1.0;
  const Vec3 origin = point + cfg.normal_bias * normal;
  const Vec3 axis = light.type == LightType::Directional ? Vec3(-light.direction)
                                                         : Vec3(light.position - origin).normalized();
  // Orthonormal frame around the light axis for disc jitter.
  const Vec3 helper = std::abs(axis.x()) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
  const Vec3 e1 = axis.cross(helper).normalized();
  const Vec3 e2 = axis.cross(e1);

  int unoccluded = 0;
  for (int s = 0; s < cfg.softness_samples; ++s) {
    const double r = std::sqrt(hash_uniform(key, s, 1, 0));
    const double phi = 2.0 * std::numbers::pi * hash_uniform(key, s, 2, 0);
    const Vec3 offset = (std::cos(phi) * e1 + std::sin(phi) * e2) * r;
    Ray ray;
    ray.origin = origin;
    double length;
    if (light.type == LightType::Directional) {
      ray.direction = (axis + offset * std::tan(light.size)).normalized();
      length = std::numeric_limits<double>::infinity();
    } else {
      const Vec3 target = light.position + offset * light.size;
      ray.direction = target - origin;
      length = ray.direction.norm();
      ray.direction /= length;
    }
    if (!occluders.occluded(ray, 0.0, length - cfg.depth_bias)) ++unoccluded;
  }
  return static_cast<double>(unoccluded) / cfg.softness_samples;
}

}  // namespace enrich
