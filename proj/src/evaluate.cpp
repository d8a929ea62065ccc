#include "enrich/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

#include "enrich/dataset_io.hpp"
#include "enrich/errors.hpp"
#include "enrich/parallel.hpp"
#include "enrich/png_io.hpp"

namespace enrich {

namespace fs = std::filesystem;

namespace {

std::map<std::string, fs::path> list_pngs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::map<std::string, fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".png") continue;
    out.emplace(fs::relative(e.path(), dir).generic_string(), e.path());
  }
  // dataset trees mix rgb and depth; keep only depth maps there
  const auto is_depth = [](const auto& kv) { return kv.first.ends_with("_depth.png"); };
  if (std::any_of(out.begin(), out.end(), is_depth)) std::erase_if(out, [&](const auto& kv) { return !is_depth(kv); });
  return out;
}

DepthImage load_depth_mm(const fs::path& p) {
  const Image<std::uint16_t> mm = read_png_gray16(p);
  DepthImage d(mm.width(), mm.height(), 1, 0.0);
  for (std::size_t i = 0; i < mm.data().size(); ++i) d.data()[i] = mm_to_depth(mm.data()[i]);
  return d;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::ordered_json metrics_json(const DepthMetrics& m) {
  nlohmann::ordered_json j;
  j["rmse"] = m.rmse;
  j["delta1"] = m.delta1;
  j["delta2"] = m.delta2;
  j["delta3"] = m.delta3;
  j["rel"] = m.rel;
  j["log10"] = m.log10;
  j["pixel_count"] = m.pixel_count;
  return j;
}

}  // namespace

DepthMetrics mean_metrics(const std::vector<ImageScore>& images) {
  if (images.empty()) throw DomainError("no images to aggregate");
  DepthMetrics a;
  for (const ImageScore& s : images) {
    a.rmse += s.metrics.rmse;
    a.rel += s.metrics.rel;
    a.log10 += s.metrics.log10;
    a.delta1 += s.metrics.delta1;
    a.delta2 += s.metrics.delta2;
    a.delta3 += s.metrics.delta3;
    a.pixel_count += s.metrics.pixel_count;
  }
  const double n = static_cast<double>(images.size());
  a.rmse /= n;
  a.rel /= n;
  a.log10 /= n;
  a.delta1 /= n;
  a.delta2 /= n;
  a.delta3 /= n;
  return a;
}

EvaluationReport evaluate_directory(const fs::path& pred_dir, const fs::path& gt_dir, const EvalConfig& cfg,
                                    int threads) {
  cfg.validate();
  const auto preds = list_pngs(pred_dir);
  const auto gts = list_pngs(gt_dir);
  EvaluationReport report;
  std::vector<std::pair<fs::path, fs::path>> pairs;
  for (const auto& [name, path] : preds) {
    const auto it = gts.find(name);
    if (it == gts.end()) {
      report.unmatched_pred.push_back(name);
      continue;
    }
    report.images.push_back({name, {}});
    pairs.emplace_back(path, it->second);
  }
  for (const auto& [name, path] : gts)
    if (!preds.contains(name)) report.unmatched_gt.push_back(name);

  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    report.images[i].metrics = compute_metrics(load_depth_mm(pairs[i].first), load_depth_mm(pairs[i].second), cfg);
  });
  if (!report.images.empty()) report.aggregate = mean_metrics(report.images);
  return report;
}

std::string EvaluationReport::to_csv() const {
  std::ostringstream out;
  out << "file,rmse,delta1,delta2,delta3,rel,log10\n";
  const auto row = [&](const std::string& name, const DepthMetrics& m) {
    out << name << ',' << fmt(m.rmse) << ',' << fmt(m.delta1) << ',' << fmt(m.delta2) << ',' << fmt(m.delta3)
        << ',' << fmt(m.rel) << ',' << fmt(m.log10) << '\n';
  };
  for (const ImageScore& s : images) row(s.file, s.metrics);
  if (!images.empty()) row("mean", aggregate);
  return out.str();
}

std::string EvaluationReport::to_json() const {
  nlohmann::ordered_json j;
  j["image_count"] = images.size();
  j["aggregate"] = images.empty() ? nlohmann::ordered_json(nullptr) : metrics_json(aggregate);
  j["images"] = nlohmann::ordered_json::array();
  for (const ImageScore& s : images) {
    nlohmann::ordered_json o = metrics_json(s.metrics);
    o["file"] = s.file;
    j["images"].push_back(std::move(o));
  }
  j["unmatched_pred"] = unmatched_pred;
  j["unmatched_gt"] = unmatched_gt;
  return j.dump(1) + "\n";
}

}  // namespace enrich
