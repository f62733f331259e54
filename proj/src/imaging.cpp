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

#include "strkit/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "strkit/error.hpp"
#include "strkit/text.hpp"

namespace strkit::imaging {

namespace fs = std::filesystem;

namespace {

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

void check_dims(int width, int height, int channels) {
  if (width < 1 || height < 1) throw Error("raster dimensions must be at least 1x1");
  if (channels != 1 && channels != 3) throw Error("raster must have 1 or 3 channels");
}

std::string read_bytes(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

cv::Mat to_mat_bgr(const RasterImage &img) {
  if (img.channels() == 1) {
    cv::Mat m(img.height(), img.width(), CV_8UC1);
    std::copy(img.pixels().begin(), img.pixels().end(), m.data);
    return m;
  }
  cv::Mat m(img.height(), img.width(), CV_8UC3);
  const auto &px = img.pixels();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    m.data[i] = px[i + 2];
    m.data[i + 1] = px[i + 1];
    m.data[i + 2] = px[i];
  }
  return m;
}

}  // namespace

RasterImage::RasterImage(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height, channels);
  pixels_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

RasterImage::RasterImage(int width, int height, int channels,
                         std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), channels_(channels), pixels_(std::move(pixels)) {
  check_dims(width, height, channels);
  if (pixels_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw Error("pixel buffer length does not match width x height x channels");
  }
}

std::string_view to_string(Side s) { return s == Side::kLeft ? "left" : "right"; }

RasterImage crop_axis_aligned(const RasterImage &img, const geometry::AABB &box) {
  const int x0 = std::clamp(round_half_up(box.x_min), 0, img.width());
  const int y0 = std::clamp(round_half_up(box.y_min), 0, img.height());
  const int x1 = std::clamp(round_half_up(box.x_max), 0, img.width());
  const int y1 = std::clamp(round_half_up(box.y_max), 0, img.height());
  if (x1 <= x0 || y1 <= y0) throw Error("crop box lies outside the image");

  const int w = x1 - x0;
  const int h = y1 - y0;
  const int c = img.channels();
  std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * h * c);
  for (int y = 0; y < h; ++y) {
    const auto *src = &img.pixels()[(static_cast<std::size_t>(y0 + y) * img.width() + x0) * c];
    std::copy(src, src + static_cast<std::size_t>(w) * c,
              out.begin() + static_cast<std::ptrdiff_t>(y) * w * c);
  }
  return RasterImage(w, h, c, std::move(out));
}

RasterImage crop_rotated(const RasterImage &img, const geometry::RotatedRect &rect) {
  if (!(rect.width > 0) || !(rect.height > 0)) throw Error("degenerate rotated rect");
  if (rect.center.x < 0 || rect.center.y < 0 || rect.center.x > img.width() ||
      rect.center.y > img.height()) {
    throw Error("rotated rect center lies outside the image");
  }
  const int w = std::max(1, round_half_up(rect.width));
  const int h = std::max(1, round_half_up(rect.height));
  const int c = img.channels();
  const double rad = rect.angle * std::numbers::pi / 180.0;
  double cs = std::cos(rad);
  double sn = std::sin(rad);
  if (rect.angle == 0.0) {
    cs = 1.0;
    sn = 0.0;
  }

  auto fetch = [&](int x, int y, int ch) -> double {
    if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) return 0.0;
    return img.at(x, y, ch);
  };

  RasterImage out(w, h, c);
  for (int v = 0; v < h; ++v) {
    const double ly = v + 0.5 - h / 2.0;
    for (int u = 0; u < w; ++u) {
      const double lx = u + 0.5 - w / 2.0;
      // Continuous source position, shifted so integer values hit pixel centers.
      const double sx = rect.center.x + lx * cs - ly * sn - 0.5;
      const double sy = rect.center.y + lx * sn + ly * cs - 0.5;
      const double fx0 = std::floor(sx);
      const double fy0 = std::floor(sy);
      const int x0 = static_cast<int>(fx0);
      const int y0 = static_cast<int>(fy0);
      const double ax = sx - fx0;
      const double ay = sy - fy0;
      for (int ch = 0; ch < c; ++ch) {
        const double top = (1 - ax) * fetch(x0, y0, ch) + ax * fetch(x0 + 1, y0, ch);
        const double bot = (1 - ax) * fetch(x0, y0 + 1, ch) + ax * fetch(x0 + 1, y0 + 1, ch);
        const double val = (1 - ay) * top + ay * bot;
        out.at(u, v, ch) = static_cast<std::uint8_t>(std::clamp(round_half_up(val), 0, 255));
      }
    }
  }
  return out;
}

RasterImage crop_polygon(const RasterImage &img, const geometry::Polygon &poly, CropMode mode) {
  if (mode == CropMode::kAxisAligned) return crop_axis_aligned(img, geometry::min_aabb(poly));
  return crop_rotated(img, geometry::min_rotated_rect(poly));
}

StripResult crop_char_strip(const RasterImage &img, std::string_view label, Side side) {
  const std::u32string chars = text::decode_utf8(label);
  if (chars.size() < 2) throw Error("label must have at least 2 characters to drop one");
  const int strip = round_half_up(static_cast<double>(img.width()) / chars.size());
  if (strip >= img.width()) throw Error("character strip would consume the whole image");
  if (strip < 1) throw Error("character strip rounds to zero width");

  geometry::AABB keep{0, 0, static_cast<double>(img.width()), static_cast<double>(img.height())};
  std::u32string rest;
  if (side == Side::kLeft) {
    keep.x_min = strip;
    rest = chars.substr(1);
  } else {
    keep.x_max = img.width() - strip;
    rest = chars.substr(0, chars.size() - 1);
  }
  return {crop_axis_aligned(img, keep), text::encode_utf8(text::trim(rest))};
}

RasterImage downscale(const RasterImage &img, int max_side) {
  const int longest = std::max(img.width(), img.height());
  if (max_side < 1) throw Error("downscale target must be positive");
  if (longest <= max_side) return img;
  const double scale = static_cast<double>(longest) / max_side;
  const int w = std::max(1, static_cast<int>(img.width() / scale));
  const int h = std::max(1, static_cast<int>(img.height() / scale));
  RasterImage out(w, h, img.channels());
  for (int y = 0; y < h; ++y) {
    const int sy0 = y * img.height() / h;
    const int sy1 = std::max(sy0 + 1, (y + 1) * img.height() / h);
    for (int x = 0; x < w; ++x) {
      const int sx0 = x * img.width() / w;
      const int sx1 = std::max(sx0 + 1, (x + 1) * img.width() / w);
      for (int ch = 0; ch < img.channels(); ++ch) {
        unsigned sum = 0;
        for (int yy = sy0; yy < sy1; ++yy)
          for (int xx = sx0; xx < sx1; ++xx) sum += img.at(xx, yy, ch);
        const unsigned n = static_cast<unsigned>((sy1 - sy0) * (sx1 - sx0));
        out.at(x, y, ch) = static_cast<std::uint8_t>((sum + n / 2) / n);
      }
    }
  }
  return out;
}

RasterImage parse_pgm(std::string_view bytes) {
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) throw Error("truncated PGM");
    return std::string(bytes.substr(start, pos - start));
  };
  const std::string magic = next_token();
  if (magic != "P2" && magic != "P5") throw Error("not a PGM file (magic " + magic + ")");
  const int w = std::stoi(next_token());
  const int h = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (maxval < 1 || maxval > 255) throw Error("only 8-bit PGM is supported");
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<std::uint8_t> px(n);
  if (magic == "P2") {
    for (std::size_t i = 0; i < n; ++i) {
      const int v = std::stoi(next_token());
      px[i] = static_cast<std::uint8_t>(maxval == 255 ? v : (v * 255 + maxval / 2) / maxval);
    }
  } else {
    ++pos;
    if (pos + n > bytes.size()) throw Error("truncated PGM pixel data");
    for (std::size_t i = 0; i < n; ++i) {
      const int v = static_cast<unsigned char>(bytes[pos + i]);
      px[i] = static_cast<std::uint8_t>(maxval == 255 ? v : (v * 255 + maxval / 2) / maxval);
    }
  }
  return RasterImage(w, h, 1, std::move(px));
}

RasterImage read_pgm(const fs::path &path) { return parse_pgm(read_bytes(path)); }

void write_pgm(const RasterImage &img, const fs::path &path) {
  if (img.channels() != 1) throw Error("PGM output needs a single-channel image");
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << "P2\n" << img.width() << ' ' << img.height() << "\n255\n";
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      out << static_cast<int>(img.at(x, y)) << (x + 1 == img.width() ? '\n' : ' ');
    }
  }
  if (!out) throw Error("write failure on " + path.string());
}

RasterImage read_image(const fs::path &path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (ext == ".pgm") return read_pgm(path);

  cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (m.empty()) throw Error("cannot decode image " + path.string());
  if (m.depth() == CV_16U) m.convertTo(m, CV_8U, 1.0 / 257.0);
  if (m.depth() != CV_8U) throw Error("unsupported pixel depth in " + path.string());
  const int src_ch = m.channels();
  if (src_ch == 1) {
    RasterImage img(m.cols, m.rows, 1);
    for (int y = 0; y < m.rows; ++y)
      for (int x = 0; x < m.cols; ++x) img.at(x, y) = m.at<std::uint8_t>(y, x);
    return img;
  }
  if (src_ch != 3 && src_ch != 4) throw Error("unsupported channel count in " + path.string());
  RasterImage img(m.cols, m.rows, 3);
  for (int y = 0; y < m.rows; ++y) {
    const std::uint8_t *row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < m.cols; ++x) {
      img.at(x, y, 0) = row[x * src_ch + 2];
      img.at(x, y, 1) = row[x * src_ch + 1];
      img.at(x, y, 2) = row[x * src_ch + 0];
    }
  }
  return img;
}

std::vector<std::uint8_t> encode_png(const RasterImage &img) {
  std::vector<std::uint8_t> buf;
  if (!cv::imencode(".png", to_mat_bgr(img), buf)) throw Error("PNG encoding failed");
  return buf;
}

void write_png(const RasterImage &img, const fs::path &path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const auto buf = encode_png(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("write failure on " + path.string());
}

}  // namespace strkit::imaging
