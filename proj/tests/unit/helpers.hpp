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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "strkit/geometry.hpp"
#include "strkit/manifest.hpp"

namespace fs = std::filesystem;

namespace th {

using strkit::geometry::Point;
using strkit::geometry::Polygon;

/// Fresh directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string &tag = "t") {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = fs::temp_directory_path() / ("strkit_" + tag + "_" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path &path() const { return path_; }
  fs::path operator/(const std::string &s) const { return path_ / s; }

 private:
  fs::path path_;
};

inline Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

inline strkit::TextInstance instance(const std::string &id, const std::string &label,
                                     Polygon poly = rect(0, 0, 10, 5)) {
  strkit::TextInstance t;
  t.id = id;
  t.source_dataset = "ds";
  t.image_ref = "img.png";
  t.polygon = std::move(poly);
  t.label = label;
  return t;
}

inline std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const fs::path &p, const std::string &text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace th
