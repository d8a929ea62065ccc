#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "enrich/mesh.hpp"
#include "enrich/primitives.hpp"
#include "enrich/texture.hpp"

namespace enrich {

struct MeshEntry {
  std::string id;
  /// Parametric recipe; absent for meshes loaded from OBJ.
  std::optional<PrimitiveKind> kind;
  int detail = 1;
  Vec3 dims = Vec3::Ones();
  std::filesystem::path obj_path;
  Mesh mesh;
};

struct TextureEntry {
  std::string id;
  TextureSource source;
  Texture texture;
};

/// Immutable set of meshes and seamless textures that scenes draw from.
/// Safe to share across render threads once built.
class AssetCatalog {
 public:
  AssetCatalog() = default;
  AssetCatalog(std::vector<MeshEntry> meshes, std::vector<TextureEntry> textures);

  /// Procedural stand-in asset set: 84 meshes from the eight primitive
  /// families with randomized dimensions and 312 textures from six families.
  static AssetCatalog procedural(std::uint64_t catalog_seed = kDefaultSeed, int mesh_count = 84,
                                 int texture_count = 312, int texture_resolution = 64);
  /// Reads a catalog manifest; relative asset paths resolve against its directory.
  static AssetCatalog from_manifest(const std::filesystem::path& path);

  /// Manifest JSON text describing every entry (recipes, not baked data).
  std::string manifest_json() const;
  /// Stable identifier: hash of manifest_json().
  std::uint64_t fingerprint() const { return fingerprint_; }

  bool empty() const { return meshes_.empty() || textures_.empty(); }
  const std::vector<MeshEntry>& meshes() const { return meshes_; }
  const std::vector<TextureEntry>& textures() const { return textures_; }
  /// Throws ConfigError for unknown ids.
  std::size_t mesh_index(const std::string& id) const;
  std::size_t texture_index(const std::string& id) const;

  static constexpr std::uint64_t kDefaultSeed = 20240521;

 private:
  std::vector<MeshEntry> meshes_;
  std::vector<TextureEntry> textures_;
  std::uint64_t fingerprint_ = 0;
};

/// Shared default procedural catalog, built once on first use.
const AssetCatalog& default_catalog();

}  // namespace enrich
