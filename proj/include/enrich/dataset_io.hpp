#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "enrich/rgbd.hpp"

namespace enrich {

enum class Split { Train, Test };

std::string_view to_string(Split s);

/// One RGB-D pair in the NYU-style tree. Paths are relative to the manifest
/// root unless absolute.
struct ManifestEntry {
  std::string category;
  std::string scene;
  std::string name;
  std::filesystem::path rgb;
  std::filesystem::path depth;
  Split split = Split::Train;
  /// "original" or "augmented" in generated manifests.
  std::string origin = "original";

  std::string source_id() const { return category + "/" + scene + "/" + name; }
};

struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;

  /// Reads `manifest.json`; root defaults to the file's directory.
  static DatasetManifest load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::vector<std::size_t> indices(Split split) const;
  std::filesystem::path resolve(const std::filesystem::path& p) const { return p.is_absolute() ? p : root / p; }
};

/// Canonical relative file paths `<category>/<scene>/<stem>_rgb.png` etc.,
/// where stem is `<name>` or `<name>_aug<k>`.
struct PairPaths {
  std::filesystem::path rgb;
  std::filesystem::path depth;
  std::filesystem::path scene_json;
};
PairPaths pair_paths(const std::string& category, const std::string& scene, const std::string& name,
                     std::optional<std::uint64_t> aug_index);

/// Meters to stored millimeters: round half to even, clamp to [0, 65535].
std::uint16_t depth_to_mm(double meters);
inline double mm_to_depth(std::uint16_t mm) { return mm / 1000.0; }

/// Loads the color PNG and the 16-bit millimeter depth PNG of `entry`.
/// Throws IoError naming the entry on missing or corrupt files or when the
/// resolution differs from (width, height).
RgbdPair load_pair(const DatasetManifest& manifest, const ManifestEntry& entry, int width = kNyuWidth,
                   int height = kNyuHeight);

/// Writes rgb and depth (and `scene_json` when non-empty) under
/// `<root>/<category>/<scene>/`. Returns the relative paths written.
PairPaths store_pair(const std::filesystem::path& root, const RgbImage& rgb, const DepthImage& depth_m,
                     const std::string& category, const std::string& scene, const std::string& name,
                     std::optional<std::uint64_t> aug_index, const std::string& scene_json = {});

/// Writes text to a file, replacing it; throws IoError with the path.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace enrich
