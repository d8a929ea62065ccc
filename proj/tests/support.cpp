#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <random>

#include "enrich/png_io.hpp"
#include "enrich/random.hpp"

namespace enrich::fixtures {

namespace fs = std::filesystem;

RgbdPair synthetic_pair(int width, int height, std::uint64_t seed) {
  Rng rng(seed);
  RgbdPair p;
  p.rgb = RgbImage(width, height, 3);
  p.depth_m = DepthImage(width, height, 1, 0.0);
  p.source_id = "synthetic/" + std::to_string(seed);
  const double wall = rng.uniform(6.0, 9.0);
  const double horizon = rng.uniform(0.55, 0.75) * height;
  const double floor_near = rng.uniform(1.5, 3.0);
  const std::array<double, 3> base{rng.uniform(60, 200), rng.uniform(60, 200), rng.uniform(60, 200)};
  const double freq = rng.uniform(0.05, 0.3);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double d = wall;
      if (y + 0.5 > horizon) {
        const double t = (y + 0.5 - horizon) / (height - horizon);
        d = 1.0 / ((1.0 - t) / wall + t / floor_near);
      }
      const bool hole = rng.uniform() < 0.01;
      p.depth_m.at(x, y) = hole ? 0.0 : std::nearbyint(d * 1000.0) / 1000.0;
      for (int c = 0; c < 3; ++c) {
        const double v = base[c] + 40.0 * std::sin(freq * x + 1.7 * c) * std::cos(freq * y) + rng.uniform(-12, 12);
        p.rgb.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return p;
}

namespace {

ManifestEntry entry_for(int i, bool test) {
  ManifestEntry e;
  e.category = i % 3 == 0 ? "kitchen" : (i % 3 == 1 ? "bedroom" : "office");
  e.scene = e.category + "_" + std::to_string(i / 30);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%05d", i);
  e.name = buf;
  const PairPaths paths = pair_paths(e.category, e.scene, e.name, std::nullopt);
  e.rgb = paths.rgb;
  e.depth = paths.depth;
  e.split = test ? Split::Test : Split::Train;
  return e;
}

}  // namespace

DatasetManifest write_synthetic_dataset(const fs::path& root, int n_train, int n_test, int width, int height,
                                        std::uint64_t seed) {
  DatasetManifest m = metadata_manifest(n_train, n_test);
  m.root = root;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const ManifestEntry& e = m.entries[i];
    const RgbdPair p = synthetic_pair(width, height, derive_job_seed(seed, i));
    store_pair(root, p.rgb, p.depth_m, e.category, e.scene, e.name, std::nullopt);
  }
  m.save(root / "manifest.json");
  return DatasetManifest::load(root / "manifest.json");
}

DatasetManifest metadata_manifest(int n_train, int n_test) {
  DatasetManifest m;
  m.root = "/nonexistent";
  for (int i = 0; i < n_train + n_test; ++i) m.entries.push_back(entry_for(i, i >= n_train));
  return m;
}

TempDir::TempDir(const std::string& tag) {
  std::random_device rd;
  const fs::path base = fs::temp_directory_path();
  do {
    path_ = base / ("enrich_" + tag + "_" + std::to_string(rd()));
  } while (fs::exists(path_));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

std::map<std::string, fs::path> files_under(const fs::path& root, const std::string& ignore) {
  std::map<std::string, fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().filename() == ignore) continue;
    out.emplace(fs::relative(e.path(), root).generic_string(), e.path());
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string diff_trees(const fs::path& a, const fs::path& b, const std::string& ignore) {
  const auto fa = files_under(a, ignore);
  const auto fb = files_under(b, ignore);
  if (fa.size() != fb.size()) return "file counts differ: " + std::to_string(fa.size()) + " vs " + std::to_string(fb.size());
  for (const auto& [rel, pa] : fa) {
    const auto it = fb.find(rel);
    if (it == fb.end()) return "missing in second tree: " + rel;
    if (slurp(pa) != slurp(it->second)) return "contents differ: " + rel;
  }
  return {};
}

}  // namespace enrich::fixtures
