// Acceptance checks: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <thread>

#include "enrich/build.hpp"
#include "enrich/dataset_io.hpp"
#include "enrich/metrics.hpp"
#include "enrich/png_io.hpp"
#include "enrich/rasterizer.hpp"
#include "enrich/raycast.hpp"
#include "enrich/sampler.hpp"
#include "support.hpp"

using namespace enrich;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Per-pixel min-depth merge written independently of composite().
void oracle_merge(const RgbdPair& real, const Framebuffer& layer, double unit_scale, RgbImage& rgb, DepthImage& depth) {
  rgb = real.rgb;
  depth = real.depth_m;
  for (int y = 0; y < real.height(); ++y) {
    for (int x = 0; x < real.width(); ++x) {
      if (!layer.mask.at(x, y)) continue;
      const double dv = std::nearbyint(layer.depth.at(x, y) * unit_scale * 1000.0) / 1000.0;
      const double dr = real.depth_m.at(x, y);
      if (dr != 0.0 && !(dv < dr)) continue;
      depth.at(x, y) = dv;
      for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = layer.rgb.at(x, y, c);
    }
  }
}

// Pixels whose 3x3 neighborhood mixes objects or object and background, or
// whose sub-pixel coverage is partial.
bool is_silhouette(const Framebuffer& fb, const GeometryBuffers& gb, int x, int y) {
  const int sub = std::popcount(gb.subsamples.at(x, y));
  if (sub > 0 && sub < 4) return true;
  const std::int32_t id = fb.object_id.at(x, y);
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      const int nx = x + dx, ny = y + dy;
      if (nx < 0 || ny < 0 || nx >= fb.width() || ny >= fb.height()) continue;
      if (fb.object_id.at(nx, ny) != id) return true;
    }
  return false;
}

Outcome criterion_occlusion_oracle() {
  const auto t0 = Clock::now();
  const PinholeCamera cam = PinholeCamera::from_hfov(64, 48, 60.0);
  const AssetCatalog& catalog = default_catalog();
  AugmentationParams params;
  std::size_t depth_mismatch = 0, rgb_interior = 0, rgb_silhouette = 0, mask_mismatch = 0, compared = 0, virtual_px = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const RgbdPair real = fixtures::synthetic_pair(64, 48, 1000 + s);
    const SceneSpec scene = sample_scene(params, derive_job_seed(77, s), catalog, cam);
    const SceneGeometry geo = build_scene_geometry(scene, catalog);
    const GeometryBuffers gb = render_geometry(geo, cam);
    const Framebuffer raster = shade_layer(geo, gb, cam, &real.rgb);
    const AugmentedPair merged = composite(real, raster, params.unit_scale, 1000);

    const Framebuffer ref = raycast_reference(geo, cam, &real.rgb);
    RgbImage oracle_rgb;
    DepthImage oracle_depth;
    oracle_merge(real, ref, params.unit_scale, oracle_rgb, oracle_depth);

    for (int y = 0; y < 48; ++y) {
      for (int x = 0; x < 64; ++x) {
        ++compared;
        virtual_px += raster.mask.at(x, y);
        if (raster.mask.at(x, y) != ref.mask.at(x, y)) ++mask_mismatch;
        if (merged.depth_m.at(x, y) != oracle_depth.at(x, y)) ++depth_mismatch;
        int worst = 0;
        for (int c = 0; c < 3; ++c)
          worst = std::max(worst, std::abs(int(merged.rgb.at(x, y, c)) - int(oracle_rgb.at(x, y, c))));
        if (worst == 0) continue;
        if (is_silhouette(raster, gb, x, y) || is_silhouette(ref, gb, x, y)) {
          if (worst > 1) ++rgb_silhouette;
        } else {
          ++rgb_interior;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = depth_mismatch == 0 && rgb_interior == 0 && rgb_silhouette == 0 && secs < 60.0;
  o.pass = o.pass && virtual_px > compared / 20;
  o.detail = fmt("100 scenes 64x48, %zu px (%zu virtual): depth mismatches %zu, interior rgb diffs %zu, silhouette rgb diffs >1 %zu, "
                 "mask mismatches %zu, %.1f s (limit 60 s)",
                 compared, virtual_px, depth_mismatch, rgb_interior, rgb_silhouette, mask_mismatch, secs);
  return o;
}


// One 200-image build shared by the coverage and dominance criteria.
struct AuditedBuild {
  BuildReport report;
  AuditResult audit;
  std::size_t dominance_pixels_checked = 0;
  std::string error;
};

const AuditedBuild& audited_build() {
  static const AuditedBuild result = [] {
    AuditedBuild r;
    try {
      static fixtures::TempDir dir("acceptance_audit");
      const DatasetManifest src = fixtures::write_synthetic_dataset(dir.path() / "src", 100, 0, 640, 480, 11);
      BuildConfig cfg;
      cfg.global_seed = 2024;
      cfg.augment_ratio = 2.0;
      cfg.output_root = dir.path() / "out";
      cfg.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
      r.report = build_dataset(cfg, src, default_catalog());
      r.audit = audit_build(cfg.output_root, src, cfg.params.coverage_bounds);
      for (const BuildRecord& rec : r.report.records) {
        const Image<std::uint16_t> before = read_png_gray16(src.resolve(src.entries[rec.source_index].depth));
        for (std::uint16_t v : before.data()) r.dominance_pixels_checked += v != 0;
      }
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    return r;
  }();
  return result;
}

Outcome criterion_coverage_law() {
  const AuditedBuild& b = audited_build();
  if (!b.error.empty()) return {false, "build failed: " + b.error};
  const auto [lo, hi] = std::minmax_element(b.audit.coverages.begin(), b.audit.coverages.end());
  Outcome o;
  o.pass = b.report.produced == 200 && b.audit.checked == 200 && b.audit.coverage_violations == 0 &&
           b.audit.coverage_mismatches == 0;
  o.detail = fmt("produced %zu/200, audited %zu, outside [0.10, 0.50] %zu, recount mismatches %zu, coverage range "
                 "[%.4f, %.4f], %zu culled attempts",
                 b.report.produced, b.audit.checked, b.audit.coverage_violations, b.audit.coverage_mismatches,
                 b.audit.coverages.empty() ? 0.0 : *lo, b.audit.coverages.empty() ? 0.0 : *hi,
                 b.report.rejected_by_coverage);
  return o;
}

Outcome criterion_randomization_shares() {
  const PinholeCamera cam = PinholeCamera::from_hfov(640, 480, 60.0);
  const AugmentationParams params;
  constexpr int kScenes = 2000;
  int colored = 0, shadows = 0;
  std::map<int, int> light_counts;
  std::array<int, 10> objects{};
  for (int s = 0; s < kScenes; ++s) {
    const SceneSpec scene = sample_scene(params, derive_job_seed(99, s), default_catalog(), cam);
    colored += scene.lights.is_colored;
    shadows += scene.shadows.enabled;
    ++light_counts[scene.lights.count];
    ++objects[scene.objects.size()];
  }
  const double expected = kScenes / 9.0;
  double chi2 = 0.0;
  for (int k = 1; k <= 9; ++k) chi2 += (objects[k] - expected) * (objects[k] - expected) / expected;
  const double critical = boost::math::quantile(boost::math::chi_squared(8), 0.99);
  bool lights_ok = true;
  for (const auto& [count, n] : light_counts) lights_ok = lights_ok && count >= 4 && count <= 6;
  const double fc = colored / double(kScenes), fs = shadows / double(kScenes);
  Outcome o;
  o.pass = std::abs(fc - 0.20) <= 0.03 && std::abs(fs - 0.50) <= 0.03 && lights_ok && objects[0] == 0 &&
           chi2 < critical;
  o.detail = fmt("colored %.4f (0.20+-0.03), shadows %.4f (0.50+-0.03), light counts %s, object-count chi2 %.3f "
                 "< %.3f (df 8, alpha 0.01)",
                 fc, fs, lights_ok ? "within {4,5,6}" : "OUT OF RANGE", chi2, critical);
  return o;
}

Outcome criterion_normalization() {
  // Deliberately off-reference statistics per channel.
  RgbImage img(320, 240, 3);
  Rng rng(5);
  for (int y = 0; y < 240; ++y)
    for (int x = 0; x < 320; ++x)
      for (int c = 0; c < 3; ++c) {
        const double v = 40.0 + 30.0 * c + 25.0 * std::sin(0.05 * x * (c + 1)) + rng.uniform(-20.0, 20.0);
        img.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
  const NormalizationStats ref;
  const std::array<double, 3> paper_mean{123.675, 116.28, 103.53}, paper_std{58.395, 57.12, 57.375};
  const ChannelMap map = color_map_for(img, ref);
  double worst = 0.0;
  std::string per_channel;
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0, sq = 0.0;
    const double n = static_cast<double>(img.pixel_count());
    for (int y = 0; y < 240; ++y)
      for (int x = 0; x < 320; ++x) sum += img.at(x, y, c) * map.scale[c] + map.offset[c];
    const double mean = sum / n;
    for (int y = 0; y < 240; ++y)
      for (int x = 0; x < 320; ++x) {
        const double d = img.at(x, y, c) * map.scale[c] + map.offset[c] - mean;
        sq += d * d;
      }
    const double sd = std::sqrt(sq / n);
    const double em = std::abs(mean - paper_mean[c]) / paper_mean[c], es = std::abs(sd - paper_std[c]) / paper_std[c];
    worst = std::max({worst, em, es});
    per_channel += fmt(" ch%d mean %.4f std %.4f;", c, mean, sd);
  }
  const bool constants = ref.mean == paper_mean && ref.std == paper_std;
  Outcome o;
  o.pass = constants && worst <= 0.01;
  o.detail = fmt("default constants %s;%s worst relative error %.2e (limit 1e-2)", constants ? "match" : "DIFFER",
                 per_channel.c_str(), worst);
  return o;
}

Outcome criterion_dataset_arithmetic() {
  const auto t0 = Clock::now();
  const DatasetManifest nyu = fixtures::metadata_manifest(24231, 645);
  BuildConfig cfg;
  cfg.global_seed = 1;
  cfg.augment_ratio = 0.10;
  const BuildPlan p10 = plan_build(cfg, nyu);
  cfg.augment_ratio = 1.0;
  const BuildPlan p100 = plan_build(cfg, nyu);
  cfg.target_test_count = 2048;
  const BuildPlan pt = plan_test_virtualization(cfg, nyu);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = p10.planned() == 2423 && p100.total_pairs() == 48462 && pt.selected_sources.size() == 645 &&
           pt.planned() == 2048 && secs < 5.0;
  o.detail = fmt("ratio 0.10 -> %zu augmented (2423), ratio 1.0 -> %zu total (48462), test %zu sources -> %zu "
                 "outputs (2048), %.2f s (limit 5 s)",
                 p10.planned(), p100.total_pairs(), pt.selected_sources.size(), pt.planned(), secs);
  return o;
}

std::string report_without_wall_time(const fs::path& root) {
  std::string text = read_text_file(root / "build_report.json");
  const auto pos = text.find("\"wall_time_s\"");
  return pos == std::string::npos ? text : text.substr(0, pos);
}

Outcome criterion_determinism() {
  fixtures::TempDir dir("acceptance_determinism");
  const DatasetManifest src = fixtures::write_synthetic_dataset(dir.path() / "src", 20, 0, 64, 48, 3);
  BuildConfig cfg;
  cfg.global_seed = 42;
  cfg.augment_ratio = 1.0;
  cfg.camera = PinholeCamera::from_hfov(64, 48, 60.0);
  std::vector<fs::path> outs;
  BuildReport last;
  for (int jobs : {1, 1, 8}) {
    cfg.jobs = jobs;
    cfg.output_root = dir.path() / ("out" + std::to_string(outs.size()));
    last = build_dataset(cfg, src, default_catalog());
    outs.push_back(cfg.output_root);
  }
  const std::string rerun = fixtures::diff_trees(outs[0], outs[1], "build_report.json");
  const std::string threads = fixtures::diff_trees(outs[0], outs[2], "build_report.json");
  const bool reports = report_without_wall_time(outs[0]) == report_without_wall_time(outs[1]) &&
                       report_without_wall_time(outs[0]) == report_without_wall_time(outs[2]);
  Outcome o;
  o.pass = rerun.empty() && threads.empty() && reports && last.produced > 0;
  o.detail = fmt("20 images 64x48, %zu produced: rerun %s, jobs 1 vs 8 %s, reports minus wall time %s",
                 last.produced, rerun.empty() ? "identical" : rerun.c_str(),
                 threads.empty() ? "identical" : threads.c_str(), reports ? "identical" : "DIFFER");
  return o;
}

DepthMetrics scalar_reference(const DepthImage& pred, const DepthImage& gt, const EvalConfig& cfg) {
  double se = 0, rel = 0, lg = 0, d1 = 0, d2 = 0, d3 = 0, n = 0;
  for (std::size_t i = 0; i < gt.data().size(); ++i) {
    const double g = gt.data()[i];
    if (g < cfg.min_depth || g > cfg.max_depth) continue;
    const double p = std::min(std::max(pred.data()[i], cfg.min_depth), cfg.max_depth);
    se += (p - g) * (p - g);
    rel += std::fabs(p - g) / g;
    lg += std::fabs(std::log10(p) - std::log10(g));
    const double r = p / g > g / p ? p / g : g / p;
    d1 += r < 1.25 ? 1 : 0;
    d2 += r < std::pow(1.25, 2) ? 1 : 0;
    d3 += r < std::pow(1.25, 3) ? 1 : 0;
    n += 1;
  }
  return {std::sqrt(se / n), rel / n, lg / n, d1 / n, d2 / n, d3 / n, static_cast<std::size_t>(n)};
}

double rel_err(double a, double b) { return a == b ? 0.0 : std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

Outcome criterion_metrics() {
  Rng rng(8);
  DepthImage gt(32, 32, 1, 0.0);
  for (double& v : gt.data()) v = rng.uniform(0.5, 9.5);
  const EvalConfig cfg;
  const DepthMetrics id = compute_metrics(gt, gt, cfg);
  const bool identity = id.rmse == 0 && id.rel == 0 && id.log10 == 0 && id.delta1 == 1 && id.delta2 == 1 &&
                        id.delta3 == 1;
  DepthImage scaled = gt;
  for (double& v : scaled.data()) v *= 1.25;
  EvalConfig unclamped = cfg;
  unclamped.max_depth = 100.0;
  const DepthMetrics sc = compute_metrics(scaled, gt, unclamped);
  const bool boundary = sc.delta1 == 0.0 && sc.delta2 == 1.0 && sc.delta3 == 1.0;

  double worst = 0.0;
  bool monotone = true;
  for (int t = 0; t < 1000; ++t) {
    DepthImage p(32, 32, 1), g(32, 32, 1);
    for (std::size_t i = 0; i < g.data().size(); ++i) {
      g.data()[i] = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.2, 12.0);
      p.data()[i] = g.data()[i] * std::exp(rng.uniform(-0.8, 0.8)) + rng.uniform(-0.1, 0.1);
    }
    const DepthMetrics a = compute_metrics(p, g, cfg);
    const DepthMetrics b = scalar_reference(p, g, cfg);
    worst = std::max({worst, rel_err(a.rmse, b.rmse), rel_err(a.rel, b.rel), rel_err(a.log10, b.log10),
                      rel_err(a.delta1, b.delta1), rel_err(a.delta2, b.delta2), rel_err(a.delta3, b.delta3)});
    monotone = monotone && a.delta1 <= a.delta2 && a.delta2 <= a.delta3 && a.pixel_count == b.pixel_count;
  }
  Outcome o;
  o.pass = identity && boundary && worst <= 1e-12 && monotone;
  o.detail = fmt("identity %s, pred=1.25*gt deltas (%.3f, %.3f, %.3f), 1000 fuzz pairs worst relative diff %.2e "
                 "(limit 1e-12), monotonicity %s",
                 identity ? "(0,1,1,1,0,0)" : "WRONG", sc.delta1, sc.delta2, sc.delta3, worst,
                 monotone ? "holds" : "VIOLATED");
  return o;
}

Outcome criterion_dominance() {
  const AuditedBuild& b = audited_build();
  if (!b.error.empty()) return {false, "build failed: " + b.error};
  Outcome o;
  o.pass = b.audit.checked == 200 && b.audit.dominance_violations == 0;
  o.detail = fmt("%zu pairs, %zu valid source pixels checked, %zu pixels deeper than source", b.audit.checked,
                 b.dominance_pixels_checked, b.audit.dominance_violations);
  return o;
}

Outcome criterion_throughput() {
  fixtures::TempDir dir("acceptance_throughput");
  const DatasetManifest src = fixtures::write_synthetic_dataset(dir.path() / "src", 50, 0, 640, 480, 21);
  const unsigned cores = std::max(1u, std::thread::hardware_concurrency());
  BuildConfig cfg;
  cfg.global_seed = 9;
  cfg.augment_ratio = 2.0;
  cfg.output_root = dir.path() / "out";
  cfg.jobs = static_cast<int>(cores);
  const auto t0 = Clock::now();
  const BuildReport r = build_dataset(cfg, src, default_catalog());
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = r.produced >= 100 && secs <= 300.0;
  o.detail = fmt("%zu pairs at 640x480 in %.1f s on %u hardware threads (limit 300 s for 100 pairs)", r.produced,
                 secs, cores);
  return o;
}

}  // namespace

// Optional arguments select criteria by number; default runs all.
int main(int argc, char** argv) {
  std::vector<std::string> only(argv + 1, argv + argc);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 occlusion/compositing oracle", criterion_occlusion_oracle},
      {"2 coverage law", criterion_coverage_law},
      {"3 randomization shares", criterion_randomization_shares},
      {"4 normalization constants", criterion_normalization},
      {"5 dataset arithmetic", criterion_dataset_arithmetic},
      {"6 determinism", criterion_determinism},
      {"7 metrics correctness", criterion_metrics},
      {"8 depth dominance", criterion_dominance},
      {"9 throughput", criterion_throughput},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name.substr(0, name.find(' '))) == only.end()) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
