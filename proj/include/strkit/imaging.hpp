// Copyright (c) 2026 The strkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "strkit/geometry.hpp"

namespace strkit::imaging {

/// Row-major 8-bit raster with 1 (gray) or 3 (RGB) interleaved channels.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, int channels, std::uint8_t fill = 0);
  RasterImage(int width, int height, int channels, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return pixels_.empty(); }
  const std::vector<std::uint8_t> &pixels() const { return pixels_; }

  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  std::uint8_t &at(int x, int y, int c = 0) {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  friend bool operator==(const RasterImage &, const RasterImage &) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> pixels_;
};

enum class Side { kLeft, kRight };

std::string_view to_string(Side s);

enum class CropMode { kAxisAligned, kRotated };

/// Copies the box rounded half-up to the pixel grid and clamped to the image.
/// Throws Error when nothing of the box lies inside the image.
RasterImage crop_axis_aligned(const RasterImage &img, const geometry::AABB &box);

/// Rectifies the rectangle into a round(width) x round(height) raster using
/// bilinear sampling; samples outside the image read as black.
RasterImage crop_rotated(const RasterImage &img, const geometry::RotatedRect &rect);

/// Axis mode crops the polygon's bounding box, rotated mode its minimum-area
/// rectangle.
RasterImage crop_polygon(const RasterImage &img, const geometry::Polygon &poly, CropMode mode);

struct StripResult {
  RasterImage image;
  std::string label;
};

/// Removes a strip of round(width / label_length) columns from one side and
/// drops the matching character from the label, trimming edge whitespace.
StripResult crop_char_strip(const RasterImage &img, std::string_view label, Side side);

/// Box-filter downscale so the longer side is at most `max_side`.
RasterImage downscale(const RasterImage &img, int max_side);

/// PGM (P2/P5) is decoded in-house; PNG, JPEG and other formats go through
/// OpenCV's codecs. Alpha is dropped and 16-bit samples are narrowed.
RasterImage read_image(const std::filesystem::path &path);
void write_png(const RasterImage &img, const std::filesystem::path &path);
/// Encodes to PNG bytes in memory.
std::vector<std::uint8_t> encode_png(const RasterImage &img);

RasterImage read_pgm(const std::filesystem::path &path);
RasterImage parse_pgm(std::string_view bytes);
/// Writes plain (ASCII, P2) PGM; the image must be single-channel.
void write_pgm(const RasterImage &img, const std::filesystem::path &path);

}  // namespace strkit::imaging
