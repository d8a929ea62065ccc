#include "enrich/texture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "enrich/errors.hpp"
#include "enrich/png_io.hpp"
#include "enrich/random.hpp"

namespace enrich {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// uv is snapped to a 2^-24 grid and reduced modulo 1 in integer arithmetic.
/// Floating-point `u - floor(u)` is not exactly periodic (1.3 - 1 != 0.3).
double wrap_unit(double u) {
  constexpr double kScale = 16777216.0;  // 2^24
  const double q = std::floor(u * kScale + 0.5);
  const auto steps = static_cast<std::int64_t>(std::fmod(q, kScale));
  const std::int64_t wrapped = steps < 0 ? steps + static_cast<std::int64_t>(kScale) : steps;
  return static_cast<double>(wrapped) / kScale;
}

int wrap_index(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

/// Value noise with integer lattice period, tileable on the unit square.
double periodic_noise(double u, double v, int period, std::uint64_t seed) {
  const double x = u * period, y = v * period;
  const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
  const double fx = smooth(x - x0), fy = smooth(y - y0);
  auto lattice = [&](int i, int j) {
    return hash_uniform(seed, static_cast<std::uint64_t>(wrap_index(i, period)),
                        static_cast<std::uint64_t>(wrap_index(j, period)), 17);
  };
  const double a = lattice(x0, y0), b = lattice(x0 + 1, y0);
  const double c = lattice(x0, y0 + 1), d = lattice(x0 + 1, y0 + 1);
  return (a * (1 - fx) + b * fx) * (1 - fy) + (c * (1 - fx) + d * fx) * fy;
}

double fbm(double u, double v, int base_period, std::uint64_t seed) {
  double sum = 0.0, amp = 0.5, norm = 0.0;
  int period = base_period;
  for (int octave = 0; octave < 4; ++octave) {
    sum += amp * periodic_noise(u, v, period, seed + octave);
    norm += amp;
    amp *= 0.5;
    period *= 2;
  }
  return sum / norm;
}

Color lerp(const std::array<double, 3>& a, const std::array<double, 3>& b, double t) {
  return Color(a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t);
}

Color evaluate(const ProceduralParams& p, double u, double v) {
  const int f = std::max(1, p.frequency);
  const int fv = p.frequency_v > 0 ? p.frequency_v : f;
  switch (p.family) {
    case ProceduralFamily::Checker: {
      // Even cell counts keep the parity pattern continuous across the wrap.
      const int fe = f + (f % 2), fve = fv + (fv % 2);
      const int cell = static_cast<int>(std::floor(u * fe)) + static_cast<int>(std::floor(v * fve));
      return (cell % 2 == 0) ? lerp(p.color_a, p.color_b, 0.0) : lerp(p.color_a, p.color_b, 1.0);
    }
    case ProceduralFamily::Stripes: {
      const double phase = std::sin(kTwoPi * (f * u + (p.frequency_v) * v));
      const double sharp = 1.0 + 8.0 * p.amount;
      return lerp(p.color_a, p.color_b, 0.5 + 0.5 * std::tanh(sharp * phase) / std::tanh(sharp));
    }
    case ProceduralFamily::Marble: {
      const double n = fbm(u, v, 4, p.noise_seed);
      const double t = 0.5 + 0.5 * std::sin(kTwoPi * f * u + 6.0 * p.amount * kTwoPi * n);
      return lerp(p.color_a, p.color_b, t);
    }
    case ProceduralFamily::Wood: {
      const double su = std::sin(std::numbers::pi * u), sv = std::sin(std::numbers::pi * v);
      const double r = std::sqrt(su * su + sv * sv);
      const double n = fbm(u, v, 2, p.noise_seed);
      const double rings = r * f + p.amount * 4.0 * n;
      const double t = std::pow(rings - std::floor(rings), 2.0);
      return lerp(p.color_a, p.color_b, t);
    }
    case ProceduralFamily::Dots: {
      const double cu = u * f - std::floor(u * f) - 0.5;
      const double cv = v * fv - std::floor(v * fv) - 0.5;
      const double radius = 0.15 + 0.3 * p.amount;
      const double d = std::sqrt(cu * cu + cv * cv);
      const double t = std::clamp((radius - d) / 0.04 + 0.5, 0.0, 1.0);
      return lerp(p.color_a, p.color_b, t);
    }
    case ProceduralFamily::GradientMix: {
      const double t = 0.5 + 0.25 * std::cos(kTwoPi * f * u) + 0.25 * std::sin(kTwoPi * fv * v);
      const double n = periodic_noise(u, v, 8, p.noise_seed);
      return lerp(p.color_a, p.color_b, std::clamp(t + p.amount * (n - 0.5), 0.0, 1.0));
    }
  }
  return Color::Zero();
}

}  // namespace

Texture::Texture(int width, int height, std::vector<float> texels)
    : width_(width), height_(height), texels_(std::move(texels)) {
  if (width <= 0 || height <= 0 || texels_.size() != static_cast<std::size_t>(width) * height * 3)
    throw ConfigError("texture size does not match its texel data");
}

Texture Texture::constant(const Color& c) {
  return Texture(1, 1, {static_cast<float>(c[0]), static_cast<float>(c[1]), static_cast<float>(c[2])});
}

Color Texture::texel(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return Color(texels_[i], texels_[i + 1], texels_[i + 2]);
}

void Texture::set_texel(int x, int y, const Color& c) {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  for (int k = 0; k < 3; ++k) texels_[i + k] = static_cast<float>(c[k]);
}

Color Texture::sample(const Vec2& uv) const {
  const double x = wrap_unit(uv.x()) * width_ - 0.5;
  const double y = wrap_unit(uv.y()) * height_ - 0.5;
  const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0, fy = y - y0;
  const int xa = wrap_index(x0, width_), xb = wrap_index(x0 + 1, width_);
  const int ya = wrap_index(y0, height_), yb = wrap_index(y0 + 1, height_);
  return (texel(xa, ya) * (1 - fx) + texel(xb, ya) * fx) * (1 - fy) +
         (texel(xa, yb) * (1 - fx) + texel(xb, yb) * fx) * fy;
}

Color Texture::mean() const {
  Color sum = Color::Zero();
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) sum += texel(x, y);
  return sum / static_cast<double>(width_ * height_);
}

Color sample_texture(const Texture& tex, const Vec2& uv) { return tex.sample(uv); }

Texture shift_texture_colors(const Texture& tex, const std::array<int, 3>& shift) {
  std::vector<float> out(tex.texels().begin(), tex.texels().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = static_cast<double>(out[i]) + shift[i % 3] / 255.0;
    out[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  return Texture(tex.width(), tex.height(), std::move(out));
}

std::string_view to_string(ProceduralFamily f) {
  switch (f) {
    case ProceduralFamily::Checker: return "checker";
    case ProceduralFamily::Stripes: return "stripes";
    case ProceduralFamily::Marble: return "marble";
    case ProceduralFamily::Wood: return "wood";
    case ProceduralFamily::Dots: return "dots";
    case ProceduralFamily::GradientMix: return "gradient_mix";
  }
  return "unknown";
}

ProceduralFamily procedural_family_from_string(std::string_view name) {
  for (ProceduralFamily f : kAllProceduralFamilies)
    if (to_string(f) == name) return f;
  throw ConfigError("unknown procedural texture family '" + std::string(name) + "'");
}

Texture bake_procedural(const ProceduralParams& params, int resolution) {
  if (resolution <= 0) throw ConfigError("texture resolution must be positive");
  std::vector<float> texels(static_cast<std::size_t>(resolution) * resolution * 3);
  for (int y = 0; y < resolution; ++y) {
    for (int x = 0; x < resolution; ++x) {
      const Color c = evaluate(params, (x + 0.5) / resolution, (y + 0.5) / resolution);
      const std::size_t i = (static_cast<std::size_t>(y) * resolution + x) * 3;
      for (int k = 0; k < 3; ++k) texels[i + k] = static_cast<float>(std::clamp(c[k], 0.0, 1.0));
    }
  }
  return Texture(resolution, resolution, std::move(texels));
}

Texture load_texture(const TextureSource& source) {
  if (source.kind == TextureSource::Kind::Procedural) return bake_procedural(source.procedural, source.resolution);
  const RgbImage img = read_png_rgb(source.image_path);
  std::vector<float> texels(img.data().size());
  for (std::size_t i = 0; i < texels.size(); ++i) texels[i] = static_cast<float>(img.data()[i] / 255.0);
  return Texture(img.width(), img.height(), std::move(texels));
}

}  // namespace enrich
