#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "enrich/camera.hpp"
#include "enrich/catalog.hpp"
#include "enrich/compositor.hpp"
#include "enrich/dataset_io.hpp"
#include "enrich/scene_spec.hpp"

namespace enrich {

struct BuildConfig {
  std::uint64_t global_seed = 0;
  /// Augmented outputs per selected original (0.10, 1.0, up to 20).
  double augment_ratio = 0.10;
  /// Share of the original train split used as sources, in (0, 1].
  double source_fraction = 1.0;
  AugmentationParams params;
  PinholeCamera camera = PinholeCamera::from_hfov(kNyuWidth, kNyuHeight, 60.0);
  std::filesystem::path output_root;
  int target_test_count = 2048;
  /// Cycle through shuffled test sources instead of sampling with replacement.
  bool balanced_test_sampling = false;
  bool normalize = true;
  NormalizationStats normalization;
  /// Depth grid of the stored maps; virtual depths snap to it before merging.
  int depth_steps_per_meter = 1000;
  int jobs = 1;
  /// Echoed verbatim into build_report.json.
  std::string effective_config_json;

  void validate() const;
};

struct PlannedJob {
  std::uint64_t job_index = 0;
  std::size_t source = 0;  // manifest entry index
  std::uint64_t seed = 0;
};

struct BuildPlan {
  enum class Kind { Augment, VirtualizeTest };
  Kind kind = Kind::Augment;
  /// Originals carried into the output dataset (Augment) or the test pool.
  std::vector<std::size_t> selected_sources;
  std::vector<PlannedJob> jobs;
  std::vector<std::string> warnings;

  std::size_t planned() const { return jobs.size(); }
  /// Originals plus planned augmented pairs.
  std::size_t total_pairs() const { return selected_sources.size() + jobs.size(); }
};

/// Selects floor(source_fraction * N_train) train sources without
/// replacement, then floor(augment_ratio * selected) outputs whose sources
/// are drawn with replacement. Job k gets derive_job_seed(global_seed, k).
/// Reads only the manifest, never the image files.
BuildPlan plan_build(const BuildConfig& config, const DatasetManifest& manifest);

/// target_test_count output slots over the test split, sources drawn with
/// replacement (or round-robin over reshuffled passes in balanced mode).
BuildPlan plan_test_virtualization(const BuildConfig& config, const DatasetManifest& manifest);

struct BuildRecord {
  std::uint64_t job_index = 0;
  std::size_t source_index = 0;
  std::string source_id;
  int attempt = 0;
  std::uint64_t scene_seed = 0;
  double coverage = 0.0;
  PairPaths paths;
};

struct BuildReport {
  BuildPlan::Kind kind = BuildPlan::Kind::Augment;
  std::size_t planned = 0;
  std::size_t produced = 0;
  std::size_t rejected_by_coverage = 0;
  std::size_t skipped = 0;
  std::vector<BuildRecord> records;         // sorted by job index
  std::vector<std::uint64_t> skipped_jobs;  // sorted
  std::uint64_t catalog_fingerprint = 0;
  std::string effective_config_json;
  double wall_time_s = 0.0;

  std::string to_json() const;
  static BuildReport from_json(const std::string& text);
};

/// Result of rendering one scene over one source pair.
struct AugmentAttempt {
  SceneSpec scene;
  double coverage = 0.0;
  bool accepted = false;
  /// Present when accepted (or when shading was forced).
  std::optional<AugmentedPair> pair;
};

/// sample_scene, visibility pass, depth merge and coverage check. Shading
/// runs only for accepted scenes (or always with force_shade) and only on
/// replaced pixels, which gives the same pixels as a full render.
AugmentAttempt augment_pair(const RgbdPair& source, std::uint64_t seed, const BuildConfig& config,
                            const AssetCatalog& catalog, bool force_shade = false);

/// Seed used for retry `attempt` of a job; attempt 0 is the job seed itself.
std::uint64_t attempt_seed(std::uint64_t job_seed, int attempt);

/// Executes a plan: retries culled scenes up to params.max_cull_retries times
/// with derived sub-seeds, stores accepted pairs with provenance, writes the
/// output manifest and build_report.json. Output bytes do not depend on
/// config.jobs.
BuildReport execute_plan(const BuildPlan& plan, const BuildConfig& config, const DatasetManifest& manifest,
                         const AssetCatalog& catalog);

BuildReport build_dataset(const BuildConfig& config, const DatasetManifest& manifest, const AssetCatalog& catalog);
BuildReport virtualize_test_set(const BuildConfig& config, const DatasetManifest& manifest,
                                const AssetCatalog& catalog);

/// Re-derives every stored pair's coverage from the depth difference with
/// its source and checks depth dominance and the coverage bounds.
struct AuditResult {
  std::size_t checked = 0;
  std::size_t dominance_violations = 0;  // pixels
  std::size_t coverage_violations = 0;   // pairs outside bounds
  std::size_t coverage_mismatches = 0;   // pairs whose recount differs from the report
  std::vector<double> coverages;
  bool ok() const { return dominance_violations == 0 && coverage_violations == 0 && coverage_mismatches == 0; }
};
AuditResult audit_build(const std::filesystem::path& output_root, const DatasetManifest& source_manifest,
                        const Interval& coverage_bounds);

}  // namespace enrich
