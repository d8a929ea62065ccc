#include <gtest/gtest.h>

#include <map>

#include "enrich/build.hpp"
#include "enrich/errors.hpp"
#include "enrich/random.hpp"
#include "support.hpp"

using namespace enrich;
namespace fs = std::filesystem;

namespace {

BuildConfig small_config(const fs::path& out) {
  BuildConfig cfg;
  cfg.global_seed = 5;
  cfg.camera = PinholeCamera::from_hfov(64, 48, 60.0);
  cfg.output_root = out;
  return cfg;
}

std::size_t files_under(const fs::path& root, const std::string& suffix) {
  std::size_t n = 0;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().filename().string().ends_with(suffix)) ++n;
  return n;
}

}  // namespace

TEST(PlanBuild, CountsFollowFloorRule) {
  const DatasetManifest nyu = fixtures::metadata_manifest(24231, 645);
  BuildConfig cfg;
  cfg.augment_ratio = 0.10;
  EXPECT_EQ(plan_build(cfg, nyu).planned(), 2423u);
  cfg.augment_ratio = 1.0;
  const BuildPlan full = plan_build(cfg, nyu);
  EXPECT_EQ(full.selected_sources.size(), 24231u);
  EXPECT_EQ(full.total_pairs(), 48462u);
  cfg.augment_ratio = 20.0;
  cfg.source_fraction = 0.01;
  const BuildPlan small = plan_build(cfg, nyu);
  EXPECT_EQ(small.selected_sources.size(), 242u);
  EXPECT_EQ(small.planned(), 4840u);
}

TEST(PlanBuild, SourcesAreTrainOnlyAndSeedsDerived) {
  const DatasetManifest m = fixtures::metadata_manifest(100, 20);
  BuildConfig cfg;
  cfg.global_seed = 77;
  cfg.augment_ratio = 3.0;
  cfg.source_fraction = 0.5;
  const BuildPlan plan = plan_build(cfg, m);
  EXPECT_EQ(plan.selected_sources.size(), 50u);
  EXPECT_TRUE(std::is_sorted(plan.selected_sources.begin(), plan.selected_sources.end()));
  EXPECT_EQ(std::adjacent_find(plan.selected_sources.begin(), plan.selected_sources.end()),
            plan.selected_sources.end());
  for (std::size_t k = 0; k < plan.jobs.size(); ++k) {
    EXPECT_EQ(plan.jobs[k].job_index, k);
    EXPECT_EQ(plan.jobs[k].seed, derive_job_seed(77, k));
    EXPECT_EQ(m.entries[plan.jobs[k].source].split, Split::Train);
    EXPECT_TRUE(std::binary_search(plan.selected_sources.begin(), plan.selected_sources.end(), plan.jobs[k].source));
  }
  const BuildPlan again = plan_build(cfg, m);
  EXPECT_EQ(again.selected_sources, plan.selected_sources);
}

TEST(PlanBuild, ZeroAndTinyPlans) {
  const DatasetManifest m = fixtures::metadata_manifest(5, 0);
  BuildConfig cfg;
  cfg.augment_ratio = 0.0;
  const BuildPlan none = plan_build(cfg, m);
  EXPECT_EQ(none.planned(), 0u);
  EXPECT_TRUE(none.warnings.empty());
  cfg.augment_ratio = 0.1;
  const BuildPlan tiny = plan_build(cfg, m);
  EXPECT_EQ(tiny.planned(), 0u);
  EXPECT_EQ(tiny.warnings.size(), 1u);
  cfg.source_fraction = 0.0;
  EXPECT_THROW(plan_build(cfg, m), ConfigError);
}

TEST(PlanTestVirtualization, TargetAndBalancedMode) {
  const DatasetManifest m = fixtures::metadata_manifest(10, 645);
  BuildConfig cfg;
  const BuildPlan plan = plan_test_virtualization(cfg, m);
  EXPECT_EQ(plan.planned(), 2048u);
  for (const PlannedJob& j : plan.jobs) EXPECT_EQ(m.entries[j.source].split, Split::Test);
  cfg.balanced_test_sampling = true;
  const BuildPlan bal = plan_test_virtualization(cfg, m);
  std::map<std::size_t, int> uses;
  for (const PlannedJob& j : bal.jobs) ++uses[j.source];
  EXPECT_EQ(uses.size(), 645u);
  for (const auto& [src, n] : uses) {
    EXPECT_GE(n, 3);
    EXPECT_LE(n, 4);
  }
  cfg.target_test_count = 0;
  EXPECT_EQ(plan_test_virtualization(cfg, m).planned(), 0u);
  cfg.target_test_count = 5;
  EXPECT_THROW(plan_test_virtualization(cfg, fixtures::metadata_manifest(5, 0)), ConfigError);
}

TEST(BuildDataset, VacuousBoundsNeverReject) {
  fixtures::TempDir dir("build_vacuous");
  const DatasetManifest src = fixtures::write_synthetic_dataset(dir.path() / "src", 6, 0, 64, 48, 1);
  BuildConfig cfg = small_config(dir.path() / "out");
  cfg.augment_ratio = 2.0;
  cfg.params.coverage_bounds = {0.0, 1.0};
  const BuildReport r = build_dataset(cfg, src, default_catalog());
  EXPECT_EQ(r.planned, 12u);
  EXPECT_EQ(r.produced, 12u);
  EXPECT_EQ(r.rejected_by_coverage, 0u);
  for (const BuildRecord& rec : r.records) EXPECT_EQ(rec.attempt, 0);
}

TEST(BuildDataset, ImpossibleBoundsSkipEverything) {
  fixtures::TempDir dir("build_impossible");
  const DatasetManifest src = fixtures::write_synthetic_dataset(dir.path() / "src", 3, 0, 64, 48, 2);
  BuildConfig cfg = small_config(dir.path() / "out");
  cfg.augment_ratio = 1.0;
  cfg.params.coverage_bounds = {0.999, 1.0};
  cfg.params.max_cull_retries = 2;
  const BuildReport r = build_dataset(cfg, src, default_catalog());
  EXPECT_EQ(r.produced, 0u);
  EXPECT_EQ(r.skipped, 3u);
  EXPECT_EQ(r.rejected_by_coverage, 9u);
  EXPECT_EQ(r.skipped_jobs, (std::vector<std::uint64_t>{0, 1, 2}));
}

TEST(BuildDataset, CountsFilesAndAudit) {
  fixtures::TempDir dir("build_counts");
  const DatasetManifest src = fixtures::write_synthetic_dataset(dir.path() / "src", 8, 2, 64, 48, 3);
  BuildConfig cfg = small_config(dir.path() / "out");
  cfg.augment_ratio = 1.5;
  const BuildReport r = build_dataset(cfg, src, default_catalog());
  EXPECT_EQ(r.planned, 12u);
  EXPECT_EQ(r.produced + r.skipped, r.planned);
  EXPECT_EQ(files_under(cfg.output_root, "_rgb.png"), r.produced);
  EXPECT_EQ(files_under(cfg.output_root, "_depth.png"), r.produced);
  EXPECT_EQ(files_under(cfg.output_root, "_scene.json"), r.produced);
  for (std::size_t i = 1; i < r.records.size(); ++i) EXPECT_LT(r.records[i - 1].job_index, r.records[i].job_index);

  const DatasetManifest out = DatasetManifest::load(cfg.output_root / "manifest.json");
  EXPECT_EQ(out.entries.size(), 8u + r.produced);
  for (const ManifestEntry& e : out.entries) EXPECT_NO_THROW(load_pair(out, e, 64, 48)) << e.name;

  const AuditResult audit = audit_build(cfg.output_root, src, cfg.params.coverage_bounds);
  EXPECT_EQ(audit.checked, r.produced);
  EXPECT_TRUE(audit.ok());

  const BuildReport back = BuildReport::from_json(read_text_file(cfg.output_root / "build_report.json"));
  EXPECT_EQ(back.to_json(), r.to_json());
}

TEST(BuildDataset, StoredPairMatchesAugmentPair) {
  fixtures::TempDir dir("build_replay");
  const DatasetManifest src = fixtures::write_synthetic_dataset(dir.path() / "src", 4, 0, 64, 48, 4);
  BuildConfig cfg = small_config(dir.path() / "out");
  cfg.augment_ratio = 1.0;
  const BuildReport r = build_dataset(cfg, src, default_catalog());
  ASSERT_FALSE(r.records.empty());
  for (const BuildRecord& rec : r.records) {
    const RgbdPair source = load_pair(src, src.entries[rec.source_index], 64, 48);
    const AugmentAttempt a = augment_pair(source, rec.scene_seed, cfg, default_catalog());
    ASSERT_TRUE(a.accepted);
    EXPECT_EQ(a.coverage, rec.coverage);
    const DatasetManifest out = DatasetManifest::load(cfg.output_root / "manifest.json");
    ManifestEntry e{"", "", "", cfg.output_root / rec.paths.rgb, cfg.output_root / rec.paths.depth};
    const RgbdPair stored = load_pair(out, e, 64, 48);
    EXPECT_EQ(stored.rgb, a.pair->rgb);
    EXPECT_EQ(stored.depth_m, a.pair->depth_m);
    EXPECT_EQ(SceneSpec(scene_from_json(scene_to_json(a.scene))).seed, rec.scene_seed);
  }
}

TEST(BuildDataset, ForcedShadingMatchesAcceptedShading) {
  const RgbdPair source = fixtures::synthetic_pair(64, 48, 9);
  BuildConfig cfg = small_config({});
  cfg.params.coverage_bounds = {0.0, 1.0};
  const AugmentAttempt a = augment_pair(source, 31, cfg, default_catalog());
  const AugmentAttempt b = augment_pair(source, 31, cfg, default_catalog(), true);
  ASSERT_TRUE(a.pair && b.pair);
  EXPECT_EQ(a.pair->rgb, b.pair->rgb);
  cfg.params.coverage_bounds = {0.999, 1.0};
  const AugmentAttempt c = augment_pair(source, 31, cfg, default_catalog());
  EXPECT_FALSE(c.accepted);
  EXPECT_FALSE(c.pair.has_value());
  EXPECT_EQ(c.coverage, a.coverage);
}

TEST(VirtualizeTestSet, ProducesTarget) {
  fixtures::TempDir dir("virt");
  const DatasetManifest src = fixtures::write_synthetic_dataset(dir.path() / "src", 2, 3, 64, 48, 6);
  BuildConfig cfg = small_config(dir.path() / "out");
  cfg.target_test_count = 7;
  const BuildReport r = virtualize_test_set(cfg, src, default_catalog());
  EXPECT_EQ(r.produced, 7u);
  for (const BuildRecord& rec : r.records) EXPECT_EQ(src.entries[rec.source_index].split, Split::Test);
  const DatasetManifest out = DatasetManifest::load(cfg.output_root / "manifest.json");
  EXPECT_EQ(out.entries.size(), 7u);
  cfg.target_test_count = 0;
  cfg.output_root = dir.path() / "empty";
  EXPECT_EQ(virtualize_test_set(cfg, src, default_catalog()).produced, 0u);
}

TEST(AttemptSeed, ZeroIsJobSeed) {
  EXPECT_EQ(attempt_seed(99, 0), 99u);
  EXPECT_NE(attempt_seed(99, 1), attempt_seed(99, 2));
}
