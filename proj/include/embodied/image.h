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

#ifndef EMBODIED_IMAGE_H_
#define EMBODIED_IMAGE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace embodied {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kWhite = {255, 255, 255};
inline constexpr Rgb kInk = {20, 20, 20};

// Row-major 8-bit RGB raster.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = kWhite);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb color);
  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  const std::vector<std::uint8_t>& data() const { return data_; }
  std::uint8_t* mutable_data() { return data_.data(); }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// Inclusive pixel rectangle; drawing clips to the image.
void FillRect(Image& image, int x_min, int y_min, int x_max, int y_max,
              Rgb color);
void StrokeRect(Image& image, int x_min, int y_min, int x_max, int y_max,
                int thickness, Rgb color);

// Fixed-metric bitmap font: every character occupies a 7x12 cell.
inline constexpr int kGlyphAdvance = 7;
inline constexpr int kLineHeight = 12;
inline constexpr int kLabelPadding = 2;

struct TextSize {
  int width = 0;
  int height = 0;
};

// Size of a padded single-line label.
TextSize MeasureLabel(std::string_view text);
// Draws text with its top-left cell corner at (x, y).
void DrawText(Image& image, int x, int y, std::string_view text, Rgb color);

// Central 1/factor crop scaled back to full size by pixel replication.
Image ZoomCenter(const Image& image, int factor);

// Deterministic PNG encoding (fixed compression, no timestamps).
std::vector<std::uint8_t> EncodePng(const Image& image);
Image DecodePng(std::span<const std::uint8_t> bytes);
void WritePng(const Image& image, const std::filesystem::path& path);
Image ReadPng(const std::filesystem::path& path);

}  // namespace embodied

#endif  // EMBODIED_IMAGE_H_
