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
#include <string>
#include <vector>

#include "strkit/manifest.hpp"

namespace strkit::adapters {

/// ICDAR 2015-style ground truth: one `gt_<stem>.txt` per image with lines
/// `x1,y1,x2,y2,x3,y3,x4,y4,transcription` (or `x_min,y_min,x_max,y_max,text`).
/// A transcription of `###` marks the region as ignored. Images are looked up
/// as `<stem>.{jpg,jpeg,png,pgm}` under `image_dir`; image_ref is stored
/// relative to `image_dir`.
std::vector<TextInstance> import_icdar(const std::filesystem::path &gt_dir,
                                       const std::filesystem::path &image_dir,
                                       const std::string &dataset);

/// Parses the lines of a single ICDAR-style ground-truth file.
std::vector<TextInstance> parse_icdar_lines(const std::string &content,
                                            const std::string &image_ref,
                                            const std::string &stem,
                                            const std::string &dataset);

/// COCO-Text-style JSON: `imgs` keyed by image id with `file_name`, and `anns`
/// keyed by annotation id with `image_id`, `mask` (flat polygon) or `bbox`
/// (x, y, w, h), `utf8_string`, `legibility` and `language`. Illegible
/// annotations import as ignored.
std::vector<TextInstance> import_coco_text(const std::filesystem::path &json_path,
                                           const std::string &dataset);

std::vector<TextInstance> parse_coco_text(const Json &doc, const std::string &dataset);

}  // namespace strkit::adapters
