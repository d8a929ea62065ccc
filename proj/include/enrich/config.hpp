#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "enrich/build.hpp"
#include "enrich/metrics.hpp"

namespace enrich {

/// Everything the command line can set. Camera intrinsics derive from
/// width, height and hfov_deg.
struct CliConfig {
  BuildConfig build;
  EvalConfig eval;
  int camera_width = kNyuWidth;
  int camera_height = kNyuHeight;
  double hfov_deg = 60.0;
  double near_plane = 0.05;
  /// Empty selects the built-in procedural catalog.
  std::filesystem::path catalog_manifest;
  std::uint64_t catalog_seed = AssetCatalog::kDefaultSeed;

  /// Rebuilds build.camera from the camera fields and validates everything.
  void finalize();
  /// `{"sampler": {...}, "camera": {...}, "build": {...}, "eval": {...}}`
  /// with one entry per key, in key-table order.
  std::string effective_json(bool include_run_keys = true) const;
};

/// `section.key` names accepted in config files and by set_config_value.
std::vector<std::string> config_keys();

/// Throws ConfigError for an unknown key or an unparsable value.
void set_config_value(CliConfig& cfg, const std::string& dotted_key, const std::string& value);

/// Reads an INI-style file (`[section]` headers, `key = value` lines, `#`
/// or `;` comments) and applies each entry. Throws ParseError on malformed
/// syntax and ConfigError on unknown keys.
void apply_config_file(CliConfig& cfg, const std::filesystem::path& path);

}  // namespace enrich
