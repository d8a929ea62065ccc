#pragma once

#include <string>

#include "enrich/image.hpp"

namespace enrich {

inline constexpr int kNyuWidth = 640;
inline constexpr int kNyuHeight = 480;

/// Registered color image and metric depth (meters, 0 = invalid).
struct RgbdPair {
  RgbImage rgb;
  DepthImage depth_m;
  std::string source_id;

  int width() const { return rgb.width(); }
  int height() const { return rgb.height(); }
  /// Throws ConfigError unless sizes agree and depths are finite and >= 0.
  void validate() const;
};

}  // namespace enrich
