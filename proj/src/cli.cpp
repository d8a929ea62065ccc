#include "enrich/cli.hpp"

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "enrich/build.hpp"
#include "enrich/config.hpp"
#include "enrich/errors.hpp"
#include "enrich/evaluate.hpp"
#include "enrich/png_io.hpp"
#include "enrich/rasterizer.hpp"

namespace enrich {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kUsage = 1;
constexpr int kRuntime = 2;

/// Raw flag values; applied on top of the config file.
struct Overrides {
  std::string config;
  std::optional<std::string> seed, ratio, source_fraction, coverage_min, coverage_max, p_color, p_shadow,
      bg_distance, jobs, out, target, catalog;
  bool balanced = false;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "INI config file ([sampler], [camera], [build], [eval])");
  app->add_option("--seed", o.seed, "global seed");
  app->add_option("--jobs", o.jobs, "worker threads");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--catalog", o.catalog, "asset catalog manifest (default: built-in procedural set)");
}

void add_sampler(CLI::App* app, Overrides& o) {
  app->add_option("--coverage-min", o.coverage_min, "lower coverage bound");
  app->add_option("--coverage-max", o.coverage_max, "upper coverage bound");
  app->add_option("--p-color", o.p_color, "probability of a colored light rig");
  app->add_option("--p-shadow", o.p_shadow, "probability of shadow casting");
  app->add_option("--bg-distance", o.bg_distance, "background plane distance (scene units)");
}

CliConfig resolve_config(const Overrides& o) {
  CliConfig cfg;
  if (!o.config.empty()) apply_config_file(cfg, o.config);
  const auto set = [&](const char* key, const std::optional<std::string>& v) {
    if (v) set_config_value(cfg, key, *v);
  };
  set("build.seed", o.seed);
  set("build.ratio", o.ratio);
  set("build.source_fraction", o.source_fraction);
  set("sampler.coverage_min", o.coverage_min);
  set("sampler.coverage_max", o.coverage_max);
  set("sampler.p_colored_light", o.p_color);
  set("sampler.p_shadows", o.p_shadow);
  set("sampler.bg_distance", o.bg_distance);
  set("build.jobs", o.jobs);
  set("build.out", o.out);
  set("build.target_test_count", o.target);
  set("build.catalog", o.catalog);
  if (o.balanced) cfg.build.balanced_test_sampling = true;
  cfg.finalize();
  cfg.build.effective_config_json = cfg.effective_json(false);
  return cfg;
}

AssetCatalog load_catalog(const CliConfig& cfg) {
  if (!cfg.catalog_manifest.empty()) return AssetCatalog::from_manifest(cfg.catalog_manifest);
  if (cfg.catalog_seed == AssetCatalog::kDefaultSeed) return default_catalog();
  return AssetCatalog::procedural(cfg.catalog_seed);
}

std::string plan_json(const BuildPlan& plan) {
  ordered_json j;
  j["kind"] = plan.kind == BuildPlan::Kind::Augment ? "augment" : "virtualize_test";
  j["selected_sources"] = plan.selected_sources.size();
  j["planned"] = plan.planned();
  j["total_pairs"] = plan.kind == BuildPlan::Kind::Augment ? plan.total_pairs() : plan.planned();
  j["warnings"] = plan.warnings;
  return j.dump(1);
}

std::string summary_json(const BuildReport& r) {
  ordered_json j;
  j["planned"] = r.planned;
  j["produced"] = r.produced;
  j["skipped"] = r.skipped;
  j["rejected_by_coverage"] = r.rejected_by_coverage;
  j["wall_time_s"] = r.wall_time_s;
  return j.dump(1);
}

int cmd_build(const Overrides& o, const std::string& manifest_path, bool dry_run, bool test_set, std::ostream& out,
              std::ostream& err) {
  const CliConfig cfg = resolve_config(o);
  err << "effective config: " << cfg.effective_json() << "\n";
  const DatasetManifest manifest = DatasetManifest::load(manifest_path);
  const BuildPlan plan = test_set ? plan_test_virtualization(cfg.build, manifest) : plan_build(cfg.build, manifest);
  for (const std::string& w : plan.warnings) err << "warning: " << w << "\n";
  if (dry_run) {
    out << plan_json(plan) << "\n";
    return 0;
  }
  if (cfg.build.output_root.empty()) throw ConfigError("--out is required");
  const BuildReport report = execute_plan(plan, cfg.build, manifest, load_catalog(cfg));
  out << summary_json(report) << "\n";
  return 0;
}

int cmd_evaluate(const Overrides& o, const std::string& pred, const std::string& gt, std::ostream& out,
                 std::ostream& err) {
  const CliConfig cfg = resolve_config(o);
  const EvaluationReport report = evaluate_directory(pred, gt, cfg.eval, cfg.build.jobs);
  for (const std::string& f : report.unmatched_pred) err << "unmatched prediction: " << f << "\n";
  for (const std::string& f : report.unmatched_gt) err << "unmatched ground truth: " << f << "\n";
  if (report.images.empty()) throw DomainError("no matched prediction/ground-truth pairs");
  if (!cfg.build.output_root.empty()) {
    fs::create_directories(cfg.build.output_root);
    write_text_file(cfg.build.output_root / "metrics.csv", report.to_csv());
    write_text_file(cfg.build.output_root / "metrics.json", report.to_json());
  }
  out << report.to_csv();
  return 0;
}

int cmd_stats(const Overrides& o, const std::string& manifest_path, const std::string& split, std::ostream& out) {
  const CliConfig cfg = resolve_config(o);
  const DatasetManifest manifest = DatasetManifest::load(manifest_path);
  ChannelStatsAccumulator acc;
  for (const ManifestEntry& e : manifest.entries) {
    if (split != "all" && to_string(e.split) != split) continue;
    acc.add(read_png_rgb(manifest.resolve(e.rgb)));
  }
  const NormalizationStats s = acc.result();
  ordered_json j;
  j["pixels"] = acc.count();
  j["mean"] = s.mean;
  j["std"] = s.std;
  out << j.dump(1) << "\n";
  (void)cfg;
  return 0;
}

RgbdPair inspect_source(const std::string& source, const std::string& manifest_path, const CliConfig& cfg) {
  const int w = cfg.build.camera.width, h = cfg.build.camera.height;
  if (!manifest_path.empty()) {
    const DatasetManifest manifest = DatasetManifest::load(manifest_path);
    for (const ManifestEntry& e : manifest.entries)
      if (e.source_id() == source) return load_pair(manifest, e, w, h);
    throw ConfigError("source '" + source + "' is not in " + manifest_path);
  }
  // A path to `<stem>_rgb.png` (or the bare stem) next to `<stem>_depth.png`.
  std::string stem = source;
  const std::string suffix = "_rgb.png";
  if (stem.size() > suffix.size() && stem.ends_with(suffix)) stem.resize(stem.size() - suffix.size());
  DatasetManifest m;
  ManifestEntry e;
  e.name = fs::path(stem).filename().string();
  e.rgb = fs::absolute(stem + "_rgb.png");
  e.depth = fs::absolute(stem + "_depth.png");
  return load_pair(m, e, w, h);
}

int cmd_inspect(const Overrides& o, const std::string& source, const std::string& manifest_path, std::ostream& out) {
  const CliConfig cfg = resolve_config(o);
  if (cfg.build.output_root.empty()) throw ConfigError("--out is required");
  const RgbdPair pair = inspect_source(source, manifest_path, cfg);
  const AugmentAttempt a = augment_pair(pair, cfg.build.global_seed, cfg.build, load_catalog(cfg), true);
  const fs::path dir = cfg.build.output_root;
  fs::create_directories(dir);
  write_png_rgb(dir / "inspect_rgb.png", a.pair->rgb);
  Image<std::uint16_t> mm(pair.width(), pair.height(), 1, 0);
  for (std::size_t i = 0; i < mm.data().size(); ++i) mm.data()[i] = depth_to_mm(a.pair->depth_m.data()[i]);
  write_png_gray16(dir / "inspect_depth.png", mm);
  Image<std::uint8_t> mask = a.pair->replaced;
  for (auto& v : mask.data()) v = v ? 255 : 0;
  write_png_gray8(dir / "inspect_mask.png", mask);
  ordered_json j;
  j["source_id"] = pair.source_id;
  j["scene_seed"] = cfg.build.global_seed;
  j["coverage"] = a.coverage;
  j["accepted"] = a.accepted;
  j["scene"] = ordered_json::parse(scene_to_json(a.scene, -1));
  write_text_file(dir / "inspect_scene.json", j.dump(1) + "\n");
  ordered_json s;
  s["coverage"] = a.coverage;
  s["accepted"] = a.accepted;
  out << s.dump(1) << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Augment RGB-D datasets with rendered virtual objects"};
  app.require_subcommand(1);
  Overrides o;
  std::string manifest, pred, gt, source, split = "train";
  bool dry_run = false;

  CLI::App* gen = app.add_subcommand("generate", "build an augmented training set");
  add_common(gen, o);
  add_sampler(gen, o);
  gen->add_option("--manifest", manifest, "source dataset manifest.json")->required();
  gen->add_option("--ratio", o.ratio, "augmented outputs per selected original");
  gen->add_option("--source-fraction", o.source_fraction, "share of the train split used as sources");
  gen->add_flag("--dry-run", dry_run, "print plan counts without rendering");

  CLI::App* virt = app.add_subcommand("virtualize-test", "augment the test split");
  add_common(virt, o);
  add_sampler(virt, o);
  virt->add_option("--manifest", manifest, "source dataset manifest.json")->required();
  virt->add_option("--target", o.target, "number of outputs");
  virt->add_flag("--balanced", o.balanced, "cycle through reshuffled test sources");
  virt->add_flag("--dry-run", dry_run, "print plan counts without rendering");

  CLI::App* eval = app.add_subcommand("evaluate", "score predicted depth maps");
  add_common(eval, o);
  eval->add_option("--pred", pred, "directory of predicted 16-bit mm PNGs")->required();
  eval->add_option("--gt", gt, "directory of ground-truth 16-bit mm PNGs")->required();

  CLI::App* stats = app.add_subcommand("stats", "per-channel color statistics of a dataset");
  add_common(stats, o);
  stats->add_option("--manifest", manifest, "dataset manifest.json")->required();
  stats->add_option("--split", split, "train, test or all")->check(CLI::IsMember({"train", "test", "all"}));

  CLI::App* insp = app.add_subcommand("inspect", "render one scene seed over one source pair");
  add_common(insp, o);
  add_sampler(insp, o);
  insp->add_option("--source", source, "source id (with --manifest) or path to <stem>_rgb.png")->required();
  insp->add_option("--manifest", manifest, "dataset manifest.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kUsage;
  }

  try {
    if (gen->parsed()) return cmd_build(o, manifest, dry_run, false, out, err);
    if (virt->parsed()) return cmd_build(o, manifest, dry_run, true, out, err);
    if (eval->parsed()) return cmd_evaluate(o, pred, gt, out, err);
    if (stats->parsed()) return cmd_stats(o, manifest, split, out);
    if (insp->parsed()) return cmd_inspect(o, source, manifest, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

}  // namespace enrich
