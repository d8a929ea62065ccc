#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace enrich {

/// Row-major single-plane image of T with `channels` interleaved samples.
template <typename T>
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels = 1, T fill = T{})
      : width_(width), height_(height), channels_(channels),
        data_(static_cast<std::size_t>(width) * height * channels, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const { return data_.empty(); }
  bool same_size(int w, int h) const { return width_ == w && height_ == h; }

  T& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
  const T& at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  bool operator==(const Image&) const = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<T> data_;
};

/// 8-bit interleaved RGB.
using RgbImage = Image<std::uint8_t>;
/// Metric depth in meters, 0 marks an invalid measurement.
using DepthImage = Image<double>;

inline RgbImage make_rgb(int width, int height) { return RgbImage(width, height, 3); }

using Rgb8 = std::array<std::uint8_t, 3>;

}  // namespace enrich
