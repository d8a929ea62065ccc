#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "enrich/dataset_io.hpp"
#include "enrich/rgbd.hpp"

namespace enrich::fixtures {

/// Room-like pair: a back wall at 6-9 m, a floor rising toward the camera in
/// the lower rows, textured color and a sprinkling of invalid (0) depths.
RgbdPair synthetic_pair(int width, int height, std::uint64_t seed);

/// Writes `n_train + n_test` synthetic pairs in the NYU-style tree plus
/// manifest.json under `root` and returns the loaded manifest.
DatasetManifest write_synthetic_dataset(const std::filesystem::path& root, int n_train, int n_test, int width,
                                        int height, std::uint64_t seed);

/// Manifest entries only; no files exist behind them.
DatasetManifest metadata_manifest(int n_train, int n_test);

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Byte-level comparison of two directory trees; returns the first
/// difference found or an empty string. `ignore` names files skipped by
/// file name.
std::string diff_trees(const std::filesystem::path& a, const std::filesystem::path& b,
                       const std::string& ignore = {});

}  // namespace enrich::fixtures
