#pragma once

#include <cstdint>
#include <limits>

#include "enrich/image.hpp"

namespace enrich {

inline constexpr double kNoDepth = std::numeric_limits<double>::infinity();

/// Virtual layer: color rendered against the background plane, planar depth
/// of virtual surfaces in scene units, and which object covers each pixel.
struct Framebuffer {
  RgbImage rgb;
  DepthImage depth;             // kNoDepth where mask is false
  Image<std::uint8_t> mask;     // 1 where a virtual object is visible
  Image<std::int32_t> object_id;  // -1 where mask is false

  Framebuffer() = default;
  Framebuffer(int width, int height)
      : rgb(width, height, 3), depth(width, height, 1, kNoDepth), mask(width, height, 1, 0),
        object_id(width, height, 1, -1) {}

  int width() const { return rgb.width(); }
  int height() const { return rgb.height(); }
  std::size_t mask_count() const;
  bool operator==(const Framebuffer&) const = default;
};

}  // namespace enrich
