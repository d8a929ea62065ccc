#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "enrich/mesh.hpp"

namespace enrich {

using Color = Eigen::Vector3d;

/// Tileable RGB texel grid in [0,1]. Sampling wraps in both axes, so every
/// texture is seamless by construction.
class Texture {
 public:
  Texture() = default;
  Texture(int width, int height, std::vector<float> texels);
  static Texture constant(const Color& c);

  int width() const { return width_; }
  int height() const { return height_; }
  Color texel(int x, int y) const;
  void set_texel(int x, int y, const Color& c);
  std::span<const float> texels() const { return texels_; }

  /// Bilinear sample with repeat wrapping; period exactly 1 in u and v.
  Color sample(const Vec2& uv) const;
  Color mean() const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> texels_;
};

Color sample_texture(const Texture& tex, const Vec2& uv);

/// Adds `shift` (8-bit color units) to every texel channel, clamping to [0,1].
Texture shift_texture_colors(const Texture& tex, const std::array<int, 3>& shift);

enum class ProceduralFamily { Checker, Stripes, Marble, Wood, Dots, GradientMix };

inline constexpr ProceduralFamily kAllProceduralFamilies[] = {
    ProceduralFamily::Checker, ProceduralFamily::Stripes, ProceduralFamily::Marble,
    ProceduralFamily::Wood,    ProceduralFamily::Dots,    ProceduralFamily::GradientMix};

std::string_view to_string(ProceduralFamily f);
ProceduralFamily procedural_family_from_string(std::string_view name);

struct ProceduralParams {
  ProceduralFamily family = ProceduralFamily::Checker;
  int frequency = 4;
  int frequency_v = 0;
  double amount = 0.5;
  std::array<double, 3> color_a{0.1, 0.1, 0.1};
  std::array<double, 3> color_b{0.9, 0.9, 0.9};
  std::uint64_t noise_seed = 0;
};

/// Evaluates the pattern at texel centers of a resolution x resolution grid.
Texture bake_procedural(const ProceduralParams& params, int resolution);

/// Either a baked procedural pattern or an 8-bit RGB PNG.
struct TextureSource {
  enum class Kind { Image, Procedural };
  Kind kind = Kind::Procedural;
  std::string id;
  ProceduralParams procedural;
  std::filesystem::path image_path;
  int resolution = 64;
};

Texture load_texture(const TextureSource& source);

}  // namespace enrich
