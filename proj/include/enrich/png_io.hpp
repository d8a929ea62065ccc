#pragma once

#include <cstdint>
#include <filesystem>

#include "enrich/image.hpp"

namespace enrich {

/// Reads an 8-bit PNG as RGB. Gray and palette inputs are expanded, alpha is dropped.
RgbImage read_png_rgb(const std::filesystem::path& path);
void write_png_rgb(const std::filesystem::path& path, const RgbImage& image);

/// 16-bit single channel PNG, raw sample values.
Image<std::uint16_t> read_png_gray16(const std::filesystem::path& path);
void write_png_gray16(const std::filesystem::path& path, const Image<std::uint16_t>& image);

/// 8-bit single channel PNG (debug masks).
void write_png_gray8(const std::filesystem::path& path, const Image<std::uint8_t>& image);

}  // namespace enrich
