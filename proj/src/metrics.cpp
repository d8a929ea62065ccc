#include "enrich/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "enrich/errors.hpp"

namespace enrich {

void EvalConfig::validate() const {
  if (!(min_depth > 0.0 && min_depth < max_depth && std::isfinite(max_depth)))
    throw ConfigError("eval depth range must satisfy 0 < min_depth < max_depth");
}

namespace {

struct Crop {
  int x0, y0, x1, y1;
};

Crop crop_for(int w, int h, bool eigen) {
  if (!eigen) return {0, 0, w, h};
  const auto sx = [w](int v) { return static_cast<int>(std::lround(v * w / 640.0)); };
  const auto sy = [h](int v) { return static_cast<int>(std::lround(v * h / 480.0)); };
  return {sx(41), sy(45), sx(601), sy(471)};
}

}  // namespace

DepthMetrics compute_metrics(const DepthImage& pred, const DepthImage& gt, const EvalConfig& cfg) {
  cfg.validate();
  if (pred.width() != gt.width() || pred.height() != gt.height() || pred.channels() != 1 || gt.channels() != 1)
    throw ConfigError("prediction and ground truth differ in size");
  const Crop c = crop_for(gt.width(), gt.height(), cfg.eigen_crop);
  double se = 0.0, rel = 0.0, lg = 0.0;
  std::size_t n = 0, d1 = 0, d2 = 0, d3 = 0;
  for (int y = c.y0; y < c.y1; ++y) {
    for (int x = c.x0; x < c.x1; ++x) {
      const double g = gt.at(x, y);
      if (!(g >= cfg.min_depth && g <= cfg.max_depth)) continue;
      double p = pred.at(x, y);
      if (cfg.clamp_prediction) p = std::clamp(p, cfg.min_depth, cfg.max_depth);
      if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("prediction must be positive and finite");
      const double diff = p - g;
      se += diff * diff;
      rel += std::abs(diff) / g;
      lg += std::abs(std::log10(p) - std::log10(g));
      // max(p/g, g/p) < t without the rounding of a quotient; 1.25^i are exact.
      const auto within = [p, g](double t) { return p < t * g && g < t * p; };
      d1 += within(1.25);
      d2 += within(1.5625);
      d3 += within(1.953125);
      ++n;
    }
  }
  if (n == 0) throw DomainError("no valid ground-truth pixels to evaluate");
  const double nd = static_cast<double>(n);
  DepthMetrics m;
  m.rmse = std::sqrt(se / nd);
  m.rel = rel / nd;
  m.log10 = lg / nd;
  m.delta1 = static_cast<double>(d1) / nd;
  m.delta2 = static_cast<double>(d2) / nd;
  m.delta3 = static_cast<double>(d3) / nd;
  m.pixel_count = n;
  return m;
}

}  // namespace enrich
