#pragma once

#include "enrich/mesh.hpp"

namespace enrich {

struct Projection {
  Vec2 pixel;
  double depth = 0.0;
};

/// Pinhole camera at the origin looking down +z with +y pointing down the
/// image. Pixel (i, j) covers [i, i+1) x [j, j+1); its center is (i+0.5, j+0.5).
/// Depth is planar (camera-frame z), the registered depth-map convention.
struct PinholeCamera {
  double fx = 0.0, fy = 0.0;
  double cx = 0.0, cy = 0.0;
  int width = 640, height = 480;
  double near_plane = 0.05;

  /// Square pixels, centered principal point, horizontal field of view in degrees.
  static PinholeCamera from_hfov(int width, int height, double hfov_deg, double near_plane = 0.05);

  void validate() const;

  /// Throws DomainError when z <= near_plane.
  Projection project(const Vec3& point) const;
  /// Throws DomainError for nonpositive depth.
  Vec3 unproject(const Vec2& pixel, double depth) const;

  /// Unnormalized direction with z = 1 through a continuous pixel position.
  /// Shared by the rasterizer and the ray-cast reference so both evaluate
  /// planar depth with the same arithmetic.
  Vec3 ray_direction(double px, double py) const {
    return Vec3((px - cx) / fx, (py - cy) / fy, 1.0);
  }
};

}  // namespace enrich
