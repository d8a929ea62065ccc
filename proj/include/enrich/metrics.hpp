#pragma once

#include <cstddef>

#include "enrich/image.hpp"

namespace enrich {

struct DepthMetrics {
  double rmse = 0.0;
  double rel = 0.0;
  double log10 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  std::size_t pixel_count = 0;
};

struct EvalConfig {
  double min_depth = 1e-3;
  double max_depth = 10.0;
  /// Clamp predictions to [min_depth, max_depth] before scoring.
  bool clamp_prediction = true;
  /// Restrict scoring to the usual NYU crop (rows 45..471, cols 41..601 at
  /// 640x480, scaled proportionally otherwise).
  bool eigen_crop = false;

  void validate() const;
};

/// Pixels with ground truth inside [min_depth, max_depth] are scored.
/// Throws ConfigError on size mismatch, DomainError when no pixel is valid.
DepthMetrics compute_metrics(const DepthImage& pred, const DepthImage& gt, const EvalConfig& cfg = {});

}  // namespace enrich
