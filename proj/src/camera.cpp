#include "enrich/camera.hpp"

#include <cmath>
#include <numbers>

#include "enrich/errors.hpp"

namespace enrich {

PinholeCamera PinholeCamera::from_hfov(int width, int height, double hfov_deg, double near_plane) {
  if (!(hfov_deg > 0.0 && hfov_deg < 180.0)) throw ConfigError("field of view must be in (0, 180)");
  PinholeCamera cam;
  cam.width = width;
  cam.height = height;
  cam.fx = 0.5 * width / std::tan(0.5 * hfov_deg * std::numbers::pi / 180.0);
  cam.fy = cam.fx;
  cam.cx = 0.5 * width;
  cam.cy = 0.5 * height;
  cam.near_plane = near_plane;
  cam.validate();
  return cam;
}

void PinholeCamera::validate() const {
  if (width <= 0 || height <= 0) throw ConfigError("camera resolution must be positive");
  if (!(fx > 0.0 && fy > 0.0)) throw ConfigError("focal lengths must be positive");
  if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height))
    throw ConfigError("principal point outside the image");
  if (!(near_plane > 0.0)) throw ConfigError("near plane must be positive");
}

Projection PinholeCamera::project(const Vec3& p) const {
  if (!(p.z() > near_plane)) throw DomainError("point is behind the near plane");
  return {Vec2(fx * p.x() / p.z() + cx, fy * p.y() / p.z() + cy), p.z()};
}

Vec3 PinholeCamera::unproject(const Vec2& pixel, double depth) const {
  if (!(depth > 0.0)) throw DomainError("depth must be positive");
  return Vec3((pixel.x() - cx) * depth / fx, (pixel.y() - cy) * depth / fy, depth);
}

}  // namespace enrich
