#include "enrich/build.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "json.hpp"

#include "enrich/errors.hpp"
#include "enrich/parallel.hpp"
#include "enrich/png_io.hpp"
#include "enrich/random.hpp"
#include "enrich/rasterizer.hpp"
#include "enrich/sampler.hpp"

namespace enrich {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Independent random streams derived from the global seed.
constexpr std::uint64_t kSelectionStream = 0x53454C454354ULL;
constexpr std::uint64_t kTestStream = 0x5445535453ULL;
constexpr int kMaxSourceRounds = 8;

std::size_t floor_count(double ratio, std::size_t n) {
  // Guard against products like 0.1 * 24230 landing just below an integer.
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
}

std::string kind_name(BuildPlan::Kind k) { return k == BuildPlan::Kind::Augment ? "augment" : "virtualize_test"; }

Image<std::uint8_t> visibility_mask(const GeometryBuffers& gb) {
  Image<std::uint8_t> m(gb.triangle.width(), gb.triangle.height(), 1, 0);
  for (std::size_t i = 0; i < m.data().size(); ++i) m.data()[i] = gb.triangle.data()[i] >= 0 ? 1 : 0;
  return m;
}

struct JobOutcome {
  bool produced = false;
  std::size_t rejected = 0;
  BuildRecord record;
};

}  // namespace

void BuildConfig::validate() const {
  params.validate();
  camera.validate();
  if (!(augment_ratio >= 0.0)) throw ConfigError("augment_ratio must be >= 0");
  if (!(source_fraction > 0.0 && source_fraction <= 1.0)) throw ConfigError("source_fraction must be in (0, 1]");
  if (target_test_count < 0) throw ConfigError("target_test_count must be >= 0");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (depth_steps_per_meter < 0) throw ConfigError("depth_steps_per_meter must be >= 0");
  normalization.validate();
}

BuildPlan plan_build(const BuildConfig& config, const DatasetManifest& manifest) {
  config.validate();
  BuildPlan plan;
  plan.kind = BuildPlan::Kind::Augment;
  std::vector<std::size_t> train = manifest.indices(Split::Train);
  const std::size_t n_sel = floor_count(config.source_fraction, train.size());

  Rng rng(derive_job_seed(config.global_seed, kSelectionStream));
  // Partial Fisher-Yates: the first n_sel slots become a uniform subset.
  for (std::size_t i = 0; i < n_sel; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i),
                                                            static_cast<std::int64_t>(train.size()) - 1));
    std::swap(train[i], train[j]);
  }
  plan.selected_sources.assign(train.begin(), train.begin() + static_cast<std::ptrdiff_t>(n_sel));
  std::sort(plan.selected_sources.begin(), plan.selected_sources.end());

  const std::size_t planned = floor_count(config.augment_ratio, n_sel);
  if (planned == 0 && config.augment_ratio > 0.0)
    plan.warnings.push_back("augment_ratio " + std::to_string(config.augment_ratio) + " over " +
                            std::to_string(n_sel) + " sources plans no outputs");
  plan.jobs.reserve(planned);
  for (std::size_t k = 0; k < planned; ++k) {
    PlannedJob job;
    job.job_index = k;
    job.source = plan.selected_sources[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n_sel) - 1))];
    job.seed = derive_job_seed(config.global_seed, k);
    plan.jobs.push_back(job);
  }
  return plan;
}

BuildPlan plan_test_virtualization(const BuildConfig& config, const DatasetManifest& manifest) {
  config.validate();
  BuildPlan plan;
  plan.kind = BuildPlan::Kind::VirtualizeTest;
  plan.selected_sources = manifest.indices(Split::Test);
  const auto target = static_cast<std::size_t>(config.target_test_count);
  if (target > 0 && plan.selected_sources.empty()) throw ConfigError("manifest has no test split to virtualize");

  const std::uint64_t stream_seed = derive_job_seed(config.global_seed, kTestStream);
  Rng rng(stream_seed);
  const std::size_t n = plan.selected_sources.size();
  std::vector<std::size_t> pass;
  for (std::size_t k = 0; k < target; ++k) {
    PlannedJob job;
    job.job_index = k;
    if (config.balanced_test_sampling) {
      if (k % n == 0) {
        pass = plan.selected_sources;
        for (std::size_t i = n; i > 1; --i)
          std::swap(pass[i - 1], pass[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
      }
      job.source = pass[k % n];
    } else {
      job.source = plan.selected_sources[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))];
    }
    job.seed = derive_job_seed(stream_seed, k);
    plan.jobs.push_back(job);
  }
  return plan;
}

std::uint64_t attempt_seed(std::uint64_t job_seed, int attempt) {
  return attempt == 0 ? job_seed : derive_job_seed(job_seed, static_cast<std::uint64_t>(attempt));
}

AugmentAttempt augment_pair(const RgbdPair& source, std::uint64_t seed, const BuildConfig& config,
                            const AssetCatalog& catalog, bool force_shade) {
  const PinholeCamera& cam = config.camera;
  if (!source.rgb.same_size(cam.width, cam.height))
    throw ConfigError("source " + source.source_id + " does not match the camera resolution");
  AugmentAttempt out;
  out.scene = sample_scene(config.params, seed, catalog, cam);
  const SceneGeometry geo = build_scene_geometry(out.scene, catalog);
  const GeometryBuffers gb = render_geometry(geo, cam);
  const Image<std::uint8_t> replaced = replacement_mask(source.depth_m, visibility_mask(gb), gb.depth,
                                                        config.params.unit_scale, config.depth_steps_per_meter);
  out.coverage = coverage_of(replaced);
  out.accepted = check_coverage(out.coverage, config.params.coverage_bounds) == CullDecision::Accept;
  if (!out.accepted && !force_shade) return out;

  const Framebuffer layer = shade_layer(geo, gb, cam, &source.rgb, 1, &replaced);
  AugmentedPair pair = composite(source, layer, config.params.unit_scale, config.depth_steps_per_meter);
  if (config.normalize) pair.rgb = normalize_colors(pair.rgb, config.normalization);
  pair.provenance.source_id = source.source_id;
  pair.provenance.scene_seed = seed;
  pair.provenance.params_hash = params_hash(config.params);
  out.pair = std::move(pair);
  return out;
}

namespace {

std::string provenance_json(const BuildRecord& r, const AugmentAttempt& a, const AugmentationParams& params) {
  ordered_json j;
  j["job_index"] = r.job_index;
  j["source_id"] = r.source_id;
  j["attempt"] = r.attempt;
  j["scene_seed"] = r.scene_seed;
  j["coverage"] = a.coverage;
  j["params_hash"] = params_hash(params);
  j["scene"] = ordered_json::parse(scene_to_json(a.scene, -1));
  return j.dump(1) + "\n";
}

JobOutcome run_job(const PlannedJob& job, BuildPlan::Kind kind, const std::vector<std::size_t>& pool,
                   const BuildConfig& config, const DatasetManifest& manifest, const AssetCatalog& catalog) {
  JobOutcome out;
  const int attempts_per_source = config.params.max_cull_retries + 1;
  const int rounds = kind == BuildPlan::Kind::VirtualizeTest ? kMaxSourceRounds : 1;
  for (int round = 0; round < rounds; ++round) {
    std::size_t source = job.source;
    if (round > 0) {
      // The slot's retry budget ran out on this source: draw another one.
      Rng rng(derive_job_seed(job.seed, 0xA000 + static_cast<std::uint64_t>(round)));
      source = pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
    }
    const ManifestEntry& entry = manifest.entries[source];
    const RgbdPair pair = load_pair(manifest, entry, config.camera.width, config.camera.height);
    for (int a = 0; a < attempts_per_source; ++a) {
      const int attempt = round * attempts_per_source + a;
      const std::uint64_t seed = attempt_seed(job.seed, attempt);
      AugmentAttempt result = augment_pair(pair, seed, config, catalog);
      if (!result.accepted) {
        ++out.rejected;
        continue;
      }
      BuildRecord& r = out.record;
      r.job_index = job.job_index;
      r.source_index = source;
      r.source_id = entry.source_id();
      r.attempt = attempt;
      r.scene_seed = seed;
      r.coverage = result.coverage;
      r.paths = store_pair(config.output_root, result.pair->rgb, result.pair->depth_m, entry.category, entry.scene,
                           entry.name, job.job_index, provenance_json(r, result, config.params));
      out.produced = true;
      return out;
    }
  }
  return out;
}

}  // namespace

BuildReport execute_plan(const BuildPlan& plan, const BuildConfig& config, const DatasetManifest& manifest,
                         const AssetCatalog& catalog) {
  config.validate();
  if (catalog.empty()) throw ConfigError("asset catalog is empty");
  if (config.output_root.empty()) throw ConfigError("output root is not set");
  const auto t0 = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(config.output_root, ec);
  if (ec) throw IoError("cannot create output root " + config.output_root.string() + ": " + ec.message());

  std::vector<JobOutcome> outcomes(plan.jobs.size());
  parallel_for(plan.jobs.size(), config.jobs, [&](std::size_t i) {
    outcomes[i] = run_job(plan.jobs[i], plan.kind, plan.selected_sources, config, manifest, catalog);
  });

  BuildReport report;
  report.kind = plan.kind;
  report.planned = plan.jobs.size();
  report.catalog_fingerprint = catalog.fingerprint();
  report.effective_config_json = config.effective_config_json;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    report.rejected_by_coverage += outcomes[i].rejected;
    if (outcomes[i].produced) {
      report.records.push_back(outcomes[i].record);
    } else {
      report.skipped_jobs.push_back(plan.jobs[i].job_index);
    }
  }
  report.produced = report.records.size();
  report.skipped = report.skipped_jobs.size();

  DatasetManifest out;
  out.root = config.output_root;
  if (plan.kind == BuildPlan::Kind::Augment) {
    for (std::size_t s : plan.selected_sources) {
      ManifestEntry e = manifest.entries[s];
      e.rgb = fs::absolute(manifest.resolve(e.rgb)).lexically_normal();
      e.depth = fs::absolute(manifest.resolve(e.depth)).lexically_normal();
      e.origin = "original";
      out.entries.push_back(std::move(e));
    }
  }
  for (const BuildRecord& r : report.records) {
    ManifestEntry e = manifest.entries[r.source_index];
    e.name = e.name + "_aug" + std::to_string(r.job_index);
    e.rgb = r.paths.rgb;
    e.depth = r.paths.depth;
    e.origin = "augmented";
    out.entries.push_back(std::move(e));
  }
  out.save(config.output_root / "manifest.json");

  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_text_file(config.output_root / "build_report.json", report.to_json());
  return report;
}

BuildReport build_dataset(const BuildConfig& config, const DatasetManifest& manifest, const AssetCatalog& catalog) {
  return execute_plan(plan_build(config, manifest), config, manifest, catalog);
}

BuildReport virtualize_test_set(const BuildConfig& config, const DatasetManifest& manifest,
                                const AssetCatalog& catalog) {
  return execute_plan(plan_test_virtualization(config, manifest), config, manifest, catalog);
}

std::string BuildReport::to_json() const {
  ordered_json j;
  j["kind"] = kind_name(kind);
  j["planned"] = planned;
  j["produced"] = produced;
  j["rejected_by_coverage"] = rejected_by_coverage;
  j["skipped"] = skipped;
  j["catalog_fingerprint"] = catalog_fingerprint;
  j["config"] = effective_config_json.empty() ? ordered_json::object() : ordered_json::parse(effective_config_json);
  j["records"] = ordered_json::array();
  for (const BuildRecord& r : records) {
    ordered_json o;
    o["job_index"] = r.job_index;
    o["source_index"] = r.source_index;
    o["source_id"] = r.source_id;
    o["attempt"] = r.attempt;
    o["scene_seed"] = r.scene_seed;
    o["coverage"] = r.coverage;
    o["rgb"] = r.paths.rgb.generic_string();
    o["depth"] = r.paths.depth.generic_string();
    o["scene_json"] = r.paths.scene_json.generic_string();
    j["records"].push_back(std::move(o));
  }
  j["skipped_jobs"] = skipped_jobs;
  j["wall_time_s"] = wall_time_s;
  return j.dump(1) + "\n";
}

BuildReport BuildReport::from_json(const std::string& text) {
  BuildReport r;
  try {
    const ordered_json j = ordered_json::parse(text);
    r.kind = j.at("kind") == "augment" ? BuildPlan::Kind::Augment : BuildPlan::Kind::VirtualizeTest;
    r.planned = j.at("planned");
    r.produced = j.at("produced");
    r.rejected_by_coverage = j.at("rejected_by_coverage");
    r.skipped = j.at("skipped");
    r.catalog_fingerprint = j.at("catalog_fingerprint");
    r.effective_config_json = j.at("config").dump();
    for (const auto& o : j.at("records")) {
      BuildRecord b;
      b.job_index = o.at("job_index");
      b.source_index = o.at("source_index");
      b.source_id = o.at("source_id");
      b.attempt = o.at("attempt");
      b.scene_seed = o.at("scene_seed");
      b.coverage = o.at("coverage");
      b.paths.rgb = o.at("rgb").get<std::string>();
      b.paths.depth = o.at("depth").get<std::string>();
      b.paths.scene_json = o.at("scene_json").get<std::string>();
      r.records.push_back(std::move(b));
    }
    r.skipped_jobs = j.at("skipped_jobs").get<std::vector<std::uint64_t>>();
    r.wall_time_s = j.at("wall_time_s");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid build report: ") + e.what());
  }
  return r;
}

AuditResult audit_build(const fs::path& output_root, const DatasetManifest& source_manifest,
                        const Interval& coverage_bounds) {
  const BuildReport report = BuildReport::from_json(read_text_file(output_root / "build_report.json"));
  AuditResult res;
  for (const BuildRecord& r : report.records) {
    if (r.source_index >= source_manifest.entries.size())
      throw ConfigError("build report references unknown source " + std::to_string(r.source_index));
    const ManifestEntry& src = source_manifest.entries[r.source_index];
    const Image<std::uint16_t> before = read_png_gray16(source_manifest.resolve(src.depth));
    const Image<std::uint16_t> after = read_png_gray16(output_root / r.paths.depth);
    if (before.width() != after.width() || before.height() != after.height())
      throw IoError("stored depth size differs from its source: " + r.paths.depth.string());
    std::size_t changed = 0;
    for (std::size_t i = 0; i < before.data().size(); ++i) {
      const std::uint16_t b = before.data()[i], a = after.data()[i];
      if (a != b) ++changed;
      if (b != 0 && a > b) ++res.dominance_violations;
    }
    const double cov = static_cast<double>(changed) / static_cast<double>(before.pixel_count());
    res.coverages.push_back(cov);
    if (!coverage_bounds.contains(cov)) ++res.coverage_violations;
    if (cov != r.coverage) ++res.coverage_mismatches;
    ++res.checked;
  }
  return res;
}

}  // namespace enrich
