#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "enrich/metrics.hpp"

namespace enrich {

struct ImageScore {
  std::string file;
  DepthMetrics metrics;
};

struct EvaluationReport {
  std::vector<ImageScore> images;  // sorted by file name
  /// Mean over images of each per-image metric; pixel_count is the total.
  DepthMetrics aggregate;
  std::vector<std::string> unmatched_pred;
  std::vector<std::string> unmatched_gt;

  std::string to_csv() const;
  std::string to_json() const;
};

/// Mean of per-image metrics. Throws DomainError for an empty list.
DepthMetrics mean_metrics(const std::vector<ImageScore>& images);

/// Pairs 16-bit millimeter PNGs by relative path under both directories.
/// Files present on only one side are listed, not fatal.
EvaluationReport evaluate_directory(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                                    const EvalConfig& cfg = {}, int threads = 1);

}  // namespace enrich
