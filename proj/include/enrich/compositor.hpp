#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "enrich/framebuffer.hpp"
#include "enrich/rgbd.hpp"
#include "enrich/scene_spec.hpp"

namespace enrich {

struct Provenance {
  std::string source_id;
  std::uint64_t scene_seed = 0;
  std::uint64_t params_hash = 0;
};

struct AugmentedPair {
  RgbImage rgb;
  DepthImage depth_m;
  /// Share of image pixels taken from the virtual layer.
  double coverage = 0.0;
  Image<std::uint8_t> replaced;
  Provenance provenance;
};

/// Per-pixel depth merge. A virtual pixel at depth dv = layer.depth * unit_scale
/// wins where layer.mask is set and either the real depth is invalid (0) or
/// dv < real depth. With depth_steps_per_meter > 0 the virtual depth is first
/// rounded (half to even) onto that grid, the one used by stored depth maps,
/// so the comparison and the stored value agree exactly.
/// Throws ConfigError on resolution mismatch or nonpositive unit_scale.
AugmentedPair composite(const RgbdPair& real, const Framebuffer& layer, double unit_scale,
                        int depth_steps_per_meter = 0);

/// Which pixels composite() would replace, without touching color.
Image<std::uint8_t> replacement_mask(const DepthImage& real_depth_m, const Image<std::uint8_t>& layer_mask,
                                     const DepthImage& layer_depth, double unit_scale, int depth_steps_per_meter = 0);

double coverage_of(const Image<std::uint8_t>& replaced);

enum class CullDecision { Accept, Reject };

/// Inclusive on both ends.
CullDecision check_coverage(double coverage, const Interval& bounds);

struct NormalizationStats {
  std::array<double, 3> mean{123.675, 116.28, 103.53};
  std::array<double, 3> std{58.395, 57.12, 57.375};

  void validate() const;
};

/// Per-channel affine map x -> x * scale + offset taking the image's own
/// mean/std onto the reference. A flat channel (std below 1e-6) maps to the
/// reference mean.
struct ChannelMap {
  std::array<double, 3> scale{};
  std::array<double, 3> offset{};
};
ChannelMap color_map_for(const RgbImage& rgb, const NormalizationStats& ref);

/// Applies color_map_for, rounding half to even and clamping to [0, 255].
RgbImage normalize_colors(const RgbImage& rgb, const NormalizationStats& ref = {});

/// Pooled per-channel mean and population std over every pixel of every
/// image (Welford accumulation). Throws ConfigError for an empty set.
NormalizationStats compute_channel_stats(std::span<const RgbImage> images);

/// Streaming form for callers that load images one at a time.
class ChannelStatsAccumulator {
 public:
  void add(const RgbImage& image);
  std::uint64_t count() const { return count_; }
  NormalizationStats result() const;

 private:
  std::uint64_t count_ = 0;
  std::array<double, 3> mean_{};
  std::array<double, 3> m2_{};
};

}  // namespace enrich
