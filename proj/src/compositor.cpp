#include "enrich/compositor.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>

#include "enrich/errors.hpp"

namespace enrich {

namespace {

void check_same_size(const RgbdPair& real, const Framebuffer& layer) {
  if (real.rgb.width() != layer.width() || real.rgb.height() != layer.height() ||
      !real.depth_m.same_size(layer.width(), layer.height()))
    throw ConfigError("composite: real pair and virtual layer resolutions differ");
}

double virtual_depth(double layer_depth, double unit_scale, int steps) {
  const double dv = layer_depth * unit_scale;
  if (steps <= 0) return dv;
  return std::nearbyint(dv * steps) / steps;
}

}  // namespace

void RgbdPair::validate() const {
  if (rgb.channels() != 3 || !depth_m.same_size(rgb.width(), rgb.height()))
    throw ConfigError("RGB-D pair " + source_id + ": color and depth sizes differ");
  for (double d : depth_m.data())
    if (!std::isfinite(d) || d < 0.0) throw ConfigError("RGB-D pair " + source_id + ": invalid depth value");
}

Image<std::uint8_t> replacement_mask(const DepthImage& real_depth_m, const Image<std::uint8_t>& layer_mask,
                                     const DepthImage& layer_depth, double unit_scale, int steps) {
  Image<std::uint8_t> out(layer_mask.width(), layer_mask.height(), 1, 0);
  const auto real = real_depth_m.data();
  const auto mask = layer_mask.data();
  const auto depth = layer_depth.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    const double dv = virtual_depth(depth[i], unit_scale, steps);
    if (real[i] == 0.0 || dv < real[i]) dst[i] = 1;
  }
  return out;
}

double coverage_of(const Image<std::uint8_t>& replaced) {
  std::size_t n = 0;
  for (std::uint8_t v : replaced.data()) n += v ? 1 : 0;
  return replaced.pixel_count() ? static_cast<double>(n) / static_cast<double>(replaced.pixel_count()) : 0.0;
}

AugmentedPair composite(const RgbdPair& real, const Framebuffer& layer, double unit_scale, int steps) {
  check_same_size(real, layer);
  if (!(unit_scale > 0.0)) throw ConfigError("composite: unit_scale must be positive");
  AugmentedPair out;
  out.rgb = real.rgb;
  out.depth_m = real.depth_m;
  out.replaced = replacement_mask(real.depth_m, layer.mask, layer.depth, unit_scale, steps);
  out.provenance.source_id = real.source_id;
  const int w = layer.width(), h = layer.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!out.replaced.at(x, y)) continue;
      out.depth_m.at(x, y) = virtual_depth(layer.depth.at(x, y), unit_scale, steps);
      for (int c = 0; c < 3; ++c) out.rgb.at(x, y, c) = layer.rgb.at(x, y, c);
    }
  }
  out.coverage = coverage_of(out.replaced);
  return out;
}

CullDecision check_coverage(double coverage, const Interval& bounds) {
  return bounds.contains(coverage) ? CullDecision::Accept : CullDecision::Reject;
}

void NormalizationStats::validate() const {
  for (double s : std) if (!(s > 0.0)) throw ConfigError("normalization std must be positive");
}

ChannelMap color_map_for(const RgbImage& rgb, const NormalizationStats& ref) {
  ChannelStatsAccumulator acc;
  acc.add(rgb);
  const NormalizationStats own = acc.result();
  ChannelMap m;
  for (int c = 0; c < 3; ++c) {
    m.scale[c] = ref.std[c] / std::max(own.std[c], 1e-6);
    m.offset[c] = ref.mean[c] - own.mean[c] * m.scale[c];
    if (own.std[c] < 1e-6) {
      // Flat channel: (x - mean) is zero, only the shift remains.
      m.scale[c] = 0.0;
      m.offset[c] = ref.mean[c];
    }
  }
  return m;
}

RgbImage normalize_colors(const RgbImage& rgb, const NormalizationStats& ref) {
  ref.validate();
  const ChannelMap m = color_map_for(rgb, ref);
  RgbImage out = rgb;
  auto dst = out.data();
  const auto src = rgb.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const int c = static_cast<int>(i % 3);
    const double v = std::nearbyint(src[i] * m.scale[c] + m.offset[c]);
    dst[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  return out;
}

void ChannelStatsAccumulator::add(const RgbImage& image) {
  const auto px = image.data();
  for (std::size_t i = 0; i + 2 < px.size(); i += 3) {
    ++count_;
    const double n = static_cast<double>(count_);
    for (int c = 0; c < 3; ++c) {
      const double x = px[i + c];
      const double delta = x - mean_[c];
      mean_[c] += delta / n;
      m2_[c] += delta * (x - mean_[c]);
    }
  }
}

NormalizationStats ChannelStatsAccumulator::result() const {
  if (count_ == 0) throw ConfigError("channel statistics need at least one pixel");
  NormalizationStats s;
  for (int c = 0; c < 3; ++c) {
    s.mean[c] = mean_[c];
    s.std[c] = std::sqrt(std::max(0.0, m2_[c] / static_cast<double>(count_)));
  }
  return s;
}

NormalizationStats compute_channel_stats(std::span<const RgbImage> images) {
  if (images.empty()) throw ConfigError("channel statistics need a non-empty image set");
  ChannelStatsAccumulator acc;
  for (const RgbImage& img : images) acc.add(img);
  return acc.result();
}

}  // namespace enrich
