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

#include "strkit/adapters.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "strkit/error.hpp"

namespace strkit::adapters {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool parse_number(std::string_view s, double &out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

}  // namespace

std::vector<TextInstance> parse_icdar_lines(const std::string &content,
                                            const std::string &image_ref,
                                            const std::string &stem,
                                            const std::string &dataset) {
  std::vector<TextInstance> out;
  std::istringstream in(content);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    std::vector<double> nums;
    std::size_t pos = 0;
    while (nums.size() < 8) {
      const std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) break;
      double v = 0;
      if (!parse_number(std::string_view(line).substr(pos, comma - pos), v)) break;
      nums.push_back(v);
      pos = comma + 1;
    }
    std::string label = unquote(line.substr(pos));
    while (!label.empty() && label.front() == ' ') label.erase(0, 1);

    TextInstance inst;
    if (nums.size() == 8) {
      for (int k = 0; k < 4; ++k) inst.polygon.vertices.push_back({nums[2 * k], nums[2 * k + 1]});
    } else if (nums.size() >= 4) {
      // Axis-aligned variant; anything after the fourth number is the label.
      inst.polygon = geometry::AABB{nums[0], nums[1], nums[2], nums[3]}.to_polygon();
      if (nums.size() > 4) {
        std::size_t p = 0;
        for (std::size_t k = 0; k < 4; ++k) p = line.find(',', p) + 1;
        label = unquote(line.substr(p));
        while (!label.empty() && label.front() == ' ') label.erase(0, 1);
      }
    } else {
      throw ParseError(image_ref, lineno, "expected 4 or 8 coordinates before the label");
    }
    inst.id = dataset + "/" + stem + "/" + std::to_string(out.size());
    inst.source_dataset = dataset;
    inst.image_ref = image_ref;
    inst.source_image_id = stem;
    if (label == "###") {
      inst.ignored = true;
      label.clear();
    }
    inst.label = std::move(label);
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<TextInstance> import_icdar(const fs::path &gt_dir, const fs::path &image_dir,
                                       const std::string &dataset) {
  std::vector<fs::path> gt_files;
  for (const auto &entry : fs::directory_iterator(gt_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      gt_files.push_back(entry.path());
    }
  }
  std::sort(gt_files.begin(), gt_files.end());

  std::vector<TextInstance> out;
  for (const fs::path &gt : gt_files) {
    std::string stem = gt.stem().string();
    if (stem.rfind("gt_", 0) == 0) stem.erase(0, 3);
    fs::path image;
    for (const char *ext : {".jpg", ".jpeg", ".png", ".pgm", ".JPG", ".PNG"}) {
      fs::path candidate = image_dir / (stem + ext);
      if (fs::exists(candidate)) {
        image = candidate;
        break;
      }
    }
    if (image.empty()) throw Error("no image found for ground truth " + gt.string());
    auto records = parse_icdar_lines(read_file(gt), fs::relative(image, image_dir).generic_string(),
                                     stem, dataset);
    std::move(records.begin(), records.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<TextInstance> parse_coco_text(const Json &doc, const std::string &dataset) {
  if (!doc.contains("imgs") || !doc.contains("anns")) {
    throw Error("COCO-Text document needs 'imgs' and 'anns'");
  }
  const Json &imgs = doc["imgs"];
  const Json &anns = doc["anns"];

  std::vector<std::pair<long long, const Json *>> ordered;
  for (auto it = anns.begin(); it != anns.end(); ++it) {
    long long key = 0;
    if (it->contains("id") && (*it)["id"].is_number_integer()) {
      key = (*it)["id"].get<long long>();
    } else {
      key = std::stoll(it.key());
    }
    ordered.emplace_back(key, &*it);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });

  std::vector<TextInstance> out;
  out.reserve(ordered.size());
  for (const auto &[ann_id, ann] : ordered) {
    const std::string image_id = std::to_string((*ann)["image_id"].get<long long>());
    auto img = imgs.find(image_id);
    if (img == imgs.end()) throw Error("annotation " + std::to_string(ann_id) +
                                       " references unknown image " + image_id);
    TextInstance inst;
    inst.id = dataset + "/" + std::to_string(ann_id);
    inst.source_dataset = dataset;
    inst.image_ref = (*img)["file_name"].get<std::string>();
    inst.source_image_id = image_id;
    const Json *mask = ann->contains("mask") ? &(*ann)["mask"] : nullptr;
    if (mask && mask->is_array() && mask->size() >= 6 && mask->size() % 2 == 0) {
      for (std::size_t k = 0; k < mask->size(); k += 2) {
        inst.polygon.vertices.push_back({(*mask)[k].get<double>(), (*mask)[k + 1].get<double>()});
      }
    } else {
      const Json &b = (*ann)["bbox"];
      const double x = b[0].get<double>(), y = b[1].get<double>();
      inst.polygon = geometry::AABB{x, y, x + b[2].get<double>(), y + b[3].get<double>()}.to_polygon();
    }
    inst.label = ann->value("utf8_string", std::string{});
    inst.ignored = ann->value("legibility", std::string("legible")) == "illegible";
    const std::string lang = ann->value("language", std::string("english"));
    inst.language = (lang == "english" || lang.empty()) ? "latin" : lang;
    if (inst.ignored) inst.label.clear();
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<TextInstance> import_coco_text(const fs::path &json_path, const std::string &dataset) {
  Json doc;
  try {
    doc = Json::parse(read_file(json_path));
  } catch (const Json::exception &e) {
    throw Error(json_path.string() + ": " + e.what());
  }
  return parse_coco_text(doc, dataset);
}

}  // namespace strkit::adapters
