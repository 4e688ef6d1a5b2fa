// Copyright 2026 The Embodied Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "embodied/image.h"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "embodied/error.h"

namespace embodied {

Image::Image(int width, int height, Rgb fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    Throw(ErrorKind::kParameter, "image size must be non-negative");
  }
  data_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    std::copy(fill.begin(), fill.end(), data_.begin() + i);
  }
}

Rgb Image::at(int x, int y) const {
  const std::size_t o = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {data_[o], data_[o + 1], data_[o + 2]};
}

void Image::set(int x, int y, Rgb color) {
  const std::size_t o = (static_cast<std::size_t>(y) * width_ + x) * 3;
  data_[o] = color[0];
  data_[o + 1] = color[1];
  data_[o + 2] = color[2];
}

void FillRect(Image& image, int x_min, int y_min, int x_max, int y_max,
              Rgb color) {
  x_min = std::max(x_min, 0);
  y_min = std::max(y_min, 0);
  x_max = std::min(x_max, image.width() - 1);
  y_max = std::min(y_max, image.height() - 1);
  for (int y = y_min; y <= y_max; ++y) {
    for (int x = x_min; x <= x_max; ++x) image.set(x, y, color);
  }
}

void StrokeRect(Image& image, int x_min, int y_min, int x_max, int y_max,
                int thickness, Rgb color) {
  const int t = thickness - 1;
  FillRect(image, x_min, y_min, x_max, std::min(y_min + t, y_max), color);
  FillRect(image, x_min, std::max(y_max - t, y_min), x_max, y_max, color);
  FillRect(image, x_min, y_min, std::min(x_min + t, x_max), y_max, color);
  FillRect(image, std::max(x_max - t, x_min), y_min, x_max, y_max, color);
}

namespace {

using Glyph = std::array<std::uint8_t, 7>;  // 5 bits per row, MSB left

Glyph GlyphFor(char c) {
  c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  switch (c) {
    case '0': return {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E};
    case '1': return {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E};
    case '2': return {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F};
    case '3': return {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E};
    case '4': return {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02};
    case '5': return {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E};
    case '6': return {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E};
    case '7': return {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08};
    case '8': return {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E};
    case '9': return {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C};
    case 'a': return {0x00, 0x00, 0x0E, 0x01, 0x0F, 0x11, 0x0F};
    case 'b': return {0x10, 0x10, 0x16, 0x19, 0x11, 0x11, 0x1E};
    case 'c': return {0x00, 0x00, 0x0E, 0x10, 0x10, 0x11, 0x0E};
    case 'd': return {0x01, 0x01, 0x0D, 0x13, 0x11, 0x11, 0x0F};
    case 'e': return {0x00, 0x00, 0x0E, 0x11, 0x1F, 0x10, 0x0E};
    case 'f': return {0x06, 0x09, 0x08, 0x1C, 0x08, 0x08, 0x08};
    case 'g': return {0x00, 0x0F, 0x11, 0x11, 0x0F, 0x01, 0x0E};
    case 'h': return {0x10, 0x10, 0x16, 0x19, 0x11, 0x11, 0x11};
    case 'i': return {0x04, 0x00, 0x0C, 0x04, 0x04, 0x04, 0x0E};
    case 'j': return {0x02, 0x00, 0x06, 0x02, 0x02, 0x12, 0x0C};
    case 'k': return {0x10, 0x10, 0x12, 0x14, 0x18, 0x14, 0x12};
    case 'l': return {0x0C, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E};
    case 'm': return {0x00, 0x00, 0x1A, 0x15, 0x15, 0x11, 0x11};
    case 'n': return {0x00, 0x00, 0x16, 0x19, 0x11, 0x11, 0x11};
    case 'o': return {0x00, 0x00, 0x0E, 0x11, 0x11, 0x11, 0x0E};
    case 'p': return {0x00, 0x00, 0x1E, 0x11, 0x1E, 0x10, 0x10};
    case 'q': return {0x00, 0x00, 0x0D, 0x13, 0x0F, 0x01, 0x01};
    case 'r': return {0x00, 0x00, 0x16, 0x19, 0x10, 0x10, 0x10};
    case 's': return {0x00, 0x00, 0x0E, 0x10, 0x0E, 0x01, 0x1E};
    case 't': return {0x08, 0x08, 0x1C, 0x08, 0x08, 0x09, 0x06};
    case 'u': return {0x00, 0x00, 0x11, 0x11, 0x11, 0x13, 0x0D};
    case 'v': return {0x00, 0x00, 0x11, 0x11, 0x11, 0x0A, 0x04};
    case 'w': return {0x00, 0x00, 0x11, 0x11, 0x15, 0x15, 0x0A};
    case 'x': return {0x00, 0x00, 0x11, 0x0A, 0x04, 0x0A, 0x11};
    case 'y': return {0x00, 0x00, 0x11, 0x11, 0x0F, 0x01, 0x0E};
    case 'z': return {0x00, 0x00, 0x1F, 0x02, 0x04, 0x08, 0x1F};
    case ':': return {0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00};
    case '_': return {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1F};
    case '-': return {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00};
    case '.': return {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C};
    case ' ': return {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00};
    default: return {0x0E, 0x11, 0x01, 0x02, 0x04, 0x00, 0x04};  // '?'
  }
}

}  // namespace

TextSize MeasureLabel(std::string_view text) {
  return {static_cast<int>(text.size()) * kGlyphAdvance + 2 * kLabelPadding,
          kLineHeight + 2 * kLabelPadding};
}

void DrawText(Image& image, int x, int y, std::string_view text, Rgb color) {
  for (std::size_t k = 0; k < text.size(); ++k) {
    const Glyph glyph = GlyphFor(text[k]);
    // 5x7 glyph sits at offset (1, 2) inside its 7x12 cell.
    const int gx = x + static_cast<int>(k) * kGlyphAdvance + 1;
    const int gy = y + 2;
    for (int row = 0; row < 7; ++row) {
      for (int col = 0; col < 5; ++col) {
        if ((glyph[row] >> (4 - col)) & 1) {
          if (image.contains(gx + col, gy + row)) {
            image.set(gx + col, gy + row, color);
          }
        }
      }
    }
  }
}

Image ZoomCenter(const Image& image, int factor) {
  if (factor < 1) Throw(ErrorKind::kParameter, "zoom factor must be >= 1");
  Image out(image.width(), image.height());
  const int x0 = (image.width() - image.width() / factor) / 2;
  const int y0 = (image.height() - image.height() / factor) / 2;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      out.set(x, y, image.at(x0 + x / factor, y0 + y / factor));
    }
  }
  return out;
}

namespace {

void AppendBytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

void ReadBytes(png_structp png, png_bytep data, png_size_t length) {
  auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cursor->offset + length > cursor->bytes.size()) {
    png_error(png, "truncated PNG stream");
  }
  std::memcpy(data, cursor->bytes.data() + cursor->offset, length);
  cursor->offset += length;
}

}  // namespace

std::vector<std::uint8_t> EncodePng(const Image& image) {
  std::vector<std::uint8_t> out;
  std::vector<png_bytep> rows(image.height());
  for (int y = 0; y < image.height(); ++y) {
    rows[y] = const_cast<png_bytep>(image.data().data()) +
              static_cast<std::size_t>(y) * image.width() * 3;
  }
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, &info);
    Throw(ErrorKind::kIo, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    Throw(ErrorKind::kIo, "PNG encoding failed");
  }
  png_set_write_fn(png, &out, AppendBytes, nullptr);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_set_rows(png, info, rows.data());
  png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

Image DecodePng(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    Throw(ErrorKind::kFormat, "not a PNG stream");
  }
  ReadCursor cursor{bytes, 0};
  Image image;
  std::vector<png_bytep> rows;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_read_struct(&png, &info, nullptr);
    Throw(ErrorKind::kIo, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    Throw(ErrorKind::kFormat, "PNG decoding failed");
  }
  png_set_read_fn(png, &cursor, ReadBytes);
  png_read_info(png, info);
  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  // Normalize everything to 8-bit RGB.
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);
  image = Image(width, height);
  rows.resize(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = image.mutable_data() + static_cast<std::size_t>(y) * width * 3;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

void WritePng(const Image& image, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = EncodePng(image);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    Throw(ErrorKind::kIo, fmt::format("cannot write '{}'", path.string()));
  }
}

Image ReadPng(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Throw(ErrorKind::kIo, fmt::format("cannot open '{}'", path.string()));
  }
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                        std::istreambuf_iterator<char>()};
  try {
    return DecodePng(bytes);
  } catch (const Error& e) {
    Throw(e.kind(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace embodied
