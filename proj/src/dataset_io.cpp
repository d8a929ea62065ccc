#include "enrich/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "enrich/errors.hpp"
#include "enrich/png_io.hpp"

namespace enrich {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string_view to_string(Split s) { return s == Split::Train ? "train" : "test"; }

DatasetManifest DatasetManifest::load(const fs::path& path) {
  DatasetManifest m;
  ordered_json j;
  try {
    j = ordered_json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    m.root = j.contains("root") ? fs::path(j.at("root").get<std::string>()) : path.parent_path();
    if (m.root.is_relative()) m.root = path.parent_path() / m.root;
    for (const auto& e : j.at("entries")) {
      ManifestEntry entry;
      entry.category = e.at("category");
      entry.scene = e.at("scene");
      entry.name = e.at("name");
      entry.rgb = e.at("rgb").get<std::string>();
      entry.depth = e.at("depth").get<std::string>();
      const std::string split = e.value("split", "train");
      if (split != "train" && split != "test") throw ParseError(path.string() + ": unknown split '" + split + "'");
      entry.split = split == "train" ? Split::Train : Split::Test;
      entry.origin = e.value("origin", "original");
      m.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return m;
}

void DatasetManifest::save(const fs::path& path) const {
  ordered_json j;
  j["entries"] = ordered_json::array();
  for (const ManifestEntry& e : entries) {
    ordered_json o;
    o["category"] = e.category;
    o["scene"] = e.scene;
    o["name"] = e.name;
    o["rgb"] = e.rgb.generic_string();
    o["depth"] = e.depth.generic_string();
    o["split"] = std::string(to_string(e.split));
    o["origin"] = e.origin;
    j["entries"].push_back(std::move(o));
  }
  write_text_file(path, j.dump(1) + "\n");
}

std::vector<std::size_t> DatasetManifest::indices(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i].split == split) out.push_back(i);
  return out;
}

PairPaths pair_paths(const std::string& category, const std::string& scene, const std::string& name,
                     std::optional<std::uint64_t> aug_index) {
  const std::string stem = aug_index ? name + "_aug" + std::to_string(*aug_index) : name;
  const fs::path dir = fs::path(category) / scene;
  return {dir / (stem + "_rgb.png"), dir / (stem + "_depth.png"), dir / (stem + "_scene.json")};
}

std::uint16_t depth_to_mm(double meters) {
  const double mm = std::nearbyint(meters * 1000.0);
  if (!(mm > 0.0)) return 0;
  if (mm >= 65535.0) return 65535;
  return static_cast<std::uint16_t>(mm);
}

RgbdPair load_pair(const DatasetManifest& manifest, const ManifestEntry& entry, int width, int height) {
  RgbdPair pair;
  pair.source_id = entry.source_id();
  try {
    pair.rgb = read_png_rgb(manifest.resolve(entry.rgb));
    const Image<std::uint16_t> mm = read_png_gray16(manifest.resolve(entry.depth));
    pair.depth_m = DepthImage(mm.width(), mm.height(), 1);
    for (std::size_t i = 0; i < mm.data().size(); ++i) pair.depth_m.data()[i] = mm_to_depth(mm.data()[i]);
  } catch (const IoError& e) {
    throw IoError("entry " + pair.source_id + ": " + e.what());
  }
  if (!pair.rgb.same_size(width, height) || !pair.depth_m.same_size(width, height))
    throw IoError("entry " + pair.source_id + ": expected " + std::to_string(width) + "x" + std::to_string(height) +
                  ", got rgb " + std::to_string(pair.rgb.width()) + "x" + std::to_string(pair.rgb.height()) +
                  " depth " + std::to_string(pair.depth_m.width()) + "x" + std::to_string(pair.depth_m.height()));
  return pair;
}

PairPaths store_pair(const fs::path& root, const RgbImage& rgb, const DepthImage& depth_m, const std::string& category,
                     const std::string& scene, const std::string& name, std::optional<std::uint64_t> aug_index,
                     const std::string& scene_json) {
  const PairPaths rel = pair_paths(category, scene, name, aug_index);
  std::error_code ec;
  fs::create_directories(root / rel.rgb.parent_path(), ec);
  if (ec) throw IoError("cannot create " + (root / rel.rgb.parent_path()).string() + ": " + ec.message());
  Image<std::uint16_t> mm(depth_m.width(), depth_m.height(), 1);
  for (std::size_t i = 0; i < mm.data().size(); ++i) mm.data()[i] = depth_to_mm(depth_m.data()[i]);
  write_png_rgb(root / rel.rgb, rgb);
  write_png_gray16(root / rel.depth, mm);
  if (!scene_json.empty()) write_text_file(root / rel.scene_json, scene_json);
  return rel;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace enrich
