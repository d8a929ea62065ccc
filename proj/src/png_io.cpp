#include "enrich/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include "enrich/errors.hpp"

namespace enrich {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

[[noreturn]] void png_error_handler(png_structp, png_const_charp msg) { throw IoError(msg); }
void png_warning_handler(png_structp, png_const_charp) {}

/// Decoded PNG rows normalized to 8-bit RGB or 16-bit gray.
struct Decoded {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<png_byte> bytes;
};

Decoded decode(const std::filesystem::path& path, bool want_gray16) {
  FilePtr file = open_file(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw IoError("not a PNG file: " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler,
                                           png_warning_handler);
  png_infop info = png_create_info_struct(png);
  Decoded out;
  try {
    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (want_gray16) {
      if (color != PNG_COLOR_TYPE_GRAY || depth != 16)
        throw IoError("expected 16-bit grayscale PNG: " + path.string());
      png_set_swap(png);  // little-endian host samples
      out.channels = 1;
      out.bit_depth = 16;
    } else {
      if (depth == 16) png_set_strip_16(png);
      if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
      if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
      if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
      if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
      if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
      out.channels = 3;
      out.bit_depth = 8;
    }
    png_read_update_info(png, info);
    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    out.bytes.resize(rowbytes * out.height);
    std::vector<png_bytep> rows(out.height);
    for (int y = 0; y < out.height; ++y) rows[y] = out.bytes.data() + rowbytes * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  } catch (const IoError& e) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(std::string(e.what()) + " (" + path.string() + ")");
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void encode(const std::filesystem::path& path, int width, int height, int color_type,
            int bit_depth, const png_byte* data, std::size_t rowbytes) {
  FilePtr file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler,
                                            png_warning_handler);
  png_infop info = png_create_info_struct(png);
  try {
    png_init_io(png, file.get());
    // Fixed settings so identical images always produce identical bytes.
    png_set_compression_level(png, 6);
    png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_SUB);
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (bit_depth == 16) png_set_swap(png);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) rows[y] = const_cast<png_bytep>(data + rowbytes * y);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
  } catch (const IoError& e) {
    png_destroy_write_struct(&png, &info);
    throw IoError(std::string(e.what()) + " (" + path.string() + ")");
  }
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) throw IoError("write failed: " + path.string());
}

}  // namespace

RgbImage read_png_rgb(const std::filesystem::path& path) {
  Decoded d = decode(path, false);
  RgbImage img(d.width, d.height, 3);
  std::copy(d.bytes.begin(), d.bytes.end(), img.data().begin());
  return img;
}

void write_png_rgb(const std::filesystem::path& path, const RgbImage& image) {
  encode(path, image.width(), image.height(), PNG_COLOR_TYPE_RGB, 8, image.data().data(),
         static_cast<std::size_t>(image.width()) * 3);
}

Image<std::uint16_t> read_png_gray16(const std::filesystem::path& path) {
  Decoded d = decode(path, true);
  Image<std::uint16_t> img(d.width, d.height, 1);
  std::memcpy(img.data().data(), d.bytes.data(), d.bytes.size());
  return img;
}

void write_png_gray16(const std::filesystem::path& path, const Image<std::uint16_t>& image) {
  encode(path, image.width(), image.height(), PNG_COLOR_TYPE_GRAY, 16,
         reinterpret_cast<const png_byte*>(image.data().data()),
         static_cast<std::size_t>(image.width()) * 2);
}

void write_png_gray8(const std::filesystem::path& path, const Image<std::uint8_t>& image) {
  encode(path, image.width(), image.height(), PNG_COLOR_TYPE_GRAY, 8, image.data().data(),
         static_cast<std::size_t>(image.width()));
}

}  // namespace enrich
