#include "enrich/catalog.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "enrich/errors.hpp"
#include "enrich/obj_io.hpp"
#include "enrich/random.hpp"

namespace enrich {

using nlohmann::ordered_json;

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Nominal extents ranges per family, in scene units.
Vec3 sample_dims(PrimitiveKind kind, Rng& rng) {
  auto u = [&](double lo, double hi) { return rng.uniform(lo, hi); };
  switch (kind) {
    case PrimitiveKind::Box: return Vec3(u(0.6, 2.5), u(0.6, 2.5), u(0.6, 2.5));
    case PrimitiveKind::Cylinder: {
      const double d = u(0.5, 1.5);
      return Vec3(d, u(0.8, 3.0), d);
    }
    case PrimitiveKind::LatheProfile: {
      const double d = u(0.6, 1.6);
      return Vec3(d, u(0.8, 2.0), d);
    }
    case PrimitiveKind::Prism: {
      const double d = u(0.6, 2.0);
      return Vec3(d, u(0.6, 2.5), d);
    }
    case PrimitiveKind::TorusSegment: {
      const double d = u(1.0, 2.5);
      return Vec3(d, d * u(0.8, 1.2), d);
    }
    case PrimitiveKind::TableLike: return Vec3(u(2.0, 3.5), u(1.5, 2.0), u(1.5, 2.5));
    case PrimitiveKind::CabinetLike: return Vec3(u(1.5, 3.0), u(2.5, 4.0), u(1.0, 1.8));
    case PrimitiveKind::VaseProfile: {
      const double d = u(0.6, 1.2);
      return Vec3(d, u(1.2, 2.5), d);
    }
  }
  return Vec3::Ones();
}

std::array<double, 3> random_color(Rng& rng) { return {rng.uniform(), rng.uniform(), rng.uniform()}; }

ordered_json mesh_to_json(const MeshEntry& e) {
  ordered_json j;
  j["id"] = e.id;
  if (e.kind) {
    j["kind"] = std::string(to_string(*e.kind));
    j["detail"] = e.detail;
    j["dims"] = {e.dims.x(), e.dims.y(), e.dims.z()};
  } else {
    j["obj"] = e.obj_path.string();
  }
  return j;
}

ordered_json texture_to_json(const TextureEntry& e) {
  ordered_json j;
  j["id"] = e.id;
  if (e.source.kind == TextureSource::Kind::Procedural) {
    const ProceduralParams& p = e.source.procedural;
    j["family"] = std::string(to_string(p.family));
    j["frequency"] = p.frequency;
    j["frequency_v"] = p.frequency_v;
    j["amount"] = p.amount;
    j["color_a"] = p.color_a;
    j["color_b"] = p.color_b;
    j["noise_seed"] = p.noise_seed;
    j["resolution"] = e.source.resolution;
  } else {
    j["png"] = e.source.image_path.string();
  }
  return j;
}

}  // namespace

AssetCatalog::AssetCatalog(std::vector<MeshEntry> meshes, std::vector<TextureEntry> textures)
    : meshes_(std::move(meshes)), textures_(std::move(textures)) {
  for (const MeshEntry& m : meshes_) m.mesh.validate();
  fingerprint_ = fnv1a(manifest_json());
}

AssetCatalog AssetCatalog::procedural(std::uint64_t catalog_seed, int mesh_count, int texture_count,
                                      int texture_resolution) {
  Rng rng(catalog_seed);
  std::vector<MeshEntry> meshes;
  constexpr int kKinds = static_cast<int>(std::size(kAllPrimitiveKinds));
  for (int i = 0; i < mesh_count; ++i) {
    MeshEntry e;
    char id[32];
    std::snprintf(id, sizeof id, "mesh_%03d", i);
    e.id = id;
    e.kind = kAllPrimitiveKinds[i % kKinds];
    e.detail = min_detail(*e.kind) == 1 ? 1 : static_cast<int>(rng.uniform_int(12, 32));
    e.dims = sample_dims(*e.kind, rng);
    e.mesh = make_primitive(*e.kind, e.detail, e.dims);
    meshes.push_back(std::move(e));
  }
  std::vector<TextureEntry> textures;
  constexpr int kFamilies = static_cast<int>(std::size(kAllProceduralFamilies));
  for (int i = 0; i < texture_count; ++i) {
    TextureEntry e;
    char id[32];
    std::snprintf(id, sizeof id, "tex_%03d", i);
    e.id = id;
    e.source.kind = TextureSource::Kind::Procedural;
    e.source.id = e.id;
    e.source.resolution = texture_resolution;
    ProceduralParams& p = e.source.procedural;
    p.family = kAllProceduralFamilies[i % kFamilies];
    p.frequency = static_cast<int>(rng.uniform_int(1, 8));
    p.frequency_v = static_cast<int>(rng.uniform_int(0, 6));
    p.amount = rng.uniform();
    p.color_a = random_color(rng);
    p.color_b = random_color(rng);
    p.noise_seed = rng.next_u64() >> 16;
    e.texture = load_texture(e.source);
    textures.push_back(std::move(e));
  }
  return AssetCatalog(std::move(meshes), std::move(textures));
}

AssetCatalog AssetCatalog::from_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open catalog manifest " + path.string());
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  std::vector<MeshEntry> meshes;
  std::vector<TextureEntry> textures;
  try {
    for (const auto& m : j.at("meshes")) {
      MeshEntry e;
      e.id = m.at("id").get<std::string>();
      if (m.contains("obj")) {
        e.obj_path = m.at("obj").get<std::string>();
        e.mesh = load_mesh(e.obj_path.is_absolute() ? e.obj_path : base / e.obj_path);
      } else {
        const auto kind = primitive_kind_from_string(m.at("kind").get<std::string>());
        if (!kind) throw ConfigError("unknown primitive kind in catalog entry " + e.id);
        e.kind = kind;
        e.detail = m.at("detail").get<int>();
        const auto d = m.at("dims").get<std::array<double, 3>>();
        e.dims = Vec3(d[0], d[1], d[2]);
        e.mesh = make_primitive(*kind, e.detail, e.dims);
      }
      meshes.push_back(std::move(e));
    }
    for (const auto& t : j.at("textures")) {
      TextureEntry e;
      e.id = t.at("id").get<std::string>();
      e.source.id = e.id;
      if (t.contains("png")) {
        e.source.kind = TextureSource::Kind::Image;
        e.source.image_path = t.at("png").get<std::string>();
        TextureSource resolved = e.source;
        if (!resolved.image_path.is_absolute()) resolved.image_path = base / resolved.image_path;
        e.texture = load_texture(resolved);
      } else {
        e.source.kind = TextureSource::Kind::Procedural;
        ProceduralParams& p = e.source.procedural;
        p.family = procedural_family_from_string(t.at("family").get<std::string>());
        p.frequency = t.value("frequency", 4);
        p.frequency_v = t.value("frequency_v", 0);
        p.amount = t.value("amount", 0.5);
        p.color_a = t.value("color_a", p.color_a);
        p.color_b = t.value("color_b", p.color_b);
        p.noise_seed = t.value("noise_seed", std::uint64_t{0});
        e.source.resolution = t.value("resolution", 64);
        e.texture = load_texture(e.source);
      }
      textures.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return AssetCatalog(std::move(meshes), std::move(textures));
}

std::string AssetCatalog::manifest_json() const {
  ordered_json j;
  j["meshes"] = ordered_json::array();
  for (const MeshEntry& m : meshes_) j["meshes"].push_back(mesh_to_json(m));
  j["textures"] = ordered_json::array();
  for (const TextureEntry& t : textures_) j["textures"].push_back(texture_to_json(t));
  return j.dump(2);
}

std::size_t AssetCatalog::mesh_index(const std::string& id) const {
  for (std::size_t i = 0; i < meshes_.size(); ++i)
    if (meshes_[i].id == id) return i;
  throw ConfigError("unknown mesh id '" + id + "'");
}

std::size_t AssetCatalog::texture_index(const std::string& id) const {
  for (std::size_t i = 0; i < textures_.size(); ++i)
    if (textures_[i].id == id) return i;
  throw ConfigError("unknown texture id '" + id + "'");
}

const AssetCatalog& default_catalog() {
  static const AssetCatalog catalog = AssetCatalog::procedural();
  return catalog;
}

}  // namespace enrich
