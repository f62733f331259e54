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

#include "strkit/manifest.hpp"

#include <fstream>
#include <set>
#include <unordered_set>

#include "strkit/error.hpp"

namespace strkit {

namespace fs = std::filesystem;

namespace {

const Json &require(const Json &j, const char *key) {
  if (!j.is_object()) throw Error("record is not a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw Error(std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const Json &j, const char *key) {
  const Json &v = require(j, key);
  if (!v.is_string()) throw Error(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const Json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

std::string_view to_string(Difficulty d) {
  switch (d) {
    case Difficulty::kChallenging: return "challenging";
    case Difficulty::kHard: return "hard";
    case Difficulty::kMedium: return "medium";
    case Difficulty::kNormal: return "normal";
    case Difficulty::kEasy: return "easy";
  }
  return "unknown";
}

std::optional<Difficulty> parse_difficulty(std::string_view s) {
  for (Difficulty d : kAllDifficulties) {
    if (to_string(d) == s) return d;
  }
  return std::nullopt;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kAccept: return "accept";
    case Verdict::kReject: return "reject";
    case Verdict::kSkip: return "skip";
  }
  return "unknown";
}

std::optional<Verdict> parse_verdict(std::string_view s) {
  if (s == "accept") return Verdict::kAccept;
  if (s == "reject") return Verdict::kReject;
  if (s == "skip") return Verdict::kSkip;
  return std::nullopt;
}

const std::string *PredictionManifest::find(const std::string &sample_id) const {
  auto it = predictions.find(sample_id);
  return it == predictions.end() ? nullptr : &it->second;
}

std::vector<Violation> validate(const TextInstance &inst) {
  std::vector<Violation> out;
  if (inst.id.empty()) out.push_back({"id", "must be nonempty"});
  if (inst.image_ref.empty()) out.push_back({"image_ref", "must be nonempty"});
  for (std::string &rule : geometry::polygon_violations(inst.polygon)) {
    out.push_back({"polygon", std::move(rule)});
  }
  if (inst.label.empty() && !inst.ignored && !inst.is_pseudo()) {
    out.push_back({"label", "empty label requires ignored=true"});
  }
  if (inst.language.empty()) out.push_back({"language", "must be nonempty"});
  return out;
}

Json polygon_to_json(const geometry::Polygon &p) {
  Json arr = Json::array();
  for (const auto &v : p.vertices) arr.push_back(Json::array({v.x, v.y}));
  return arr;
}

geometry::Polygon polygon_from_json(const Json &j) {
  if (!j.is_array()) throw Error("polygon must be an array of [x, y] pairs");
  geometry::Polygon p;
  for (const Json &v : j) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw Error("polygon vertex must be a [x, y] number pair");
    }
    p.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  return p;
}

Json to_json(const TextInstance &inst) {
  Json j;
  j["id"] = inst.id;
  j["source_dataset"] = inst.source_dataset;
  j["image_ref"] = inst.image_ref;
  if (inst.image_digest) j["image_digest"] = *inst.image_digest;
  if (inst.source_image_id) j["source_image_id"] = *inst.source_image_id;
  j["polygon"] = polygon_to_json(inst.polygon);
  j["label"] = inst.label;
  j["ignored"] = inst.ignored;
  j["language"] = inst.language;
  if (inst.crop_ref) j["crop_ref"] = *inst.crop_ref;
  if (inst.difficulty) j["difficulty"] = std::string(to_string(*inst.difficulty));
  if (inst.provenance) {
    Json p;
    p["pseudo"] = inst.provenance->pseudo;
    p["detectors"] = inst.provenance->detectors;
    p["member_ious"] = inst.provenance->member_ious;
    j["provenance"] = std::move(p);
  }
  return j;
}

TextInstance instance_from_json(const Json &j) {
  TextInstance inst;
  inst.id = require_string(j, "id");
  inst.source_dataset = require_string(j, "source_dataset");
  inst.image_ref = require_string(j, "image_ref");
  inst.image_digest = optional_string(j, "image_digest");
  inst.source_image_id = optional_string(j, "source_image_id");
  inst.polygon = polygon_from_json(require(j, "polygon"));
  inst.label = require_string(j, "label");
  const Json &ignored = require(j, "ignored");
  if (!ignored.is_boolean()) throw Error("field 'ignored' must be a boolean");
  inst.ignored = ignored.get<bool>();
  if (auto lang = optional_string(j, "language")) inst.language = *lang;
  inst.crop_ref = optional_string(j, "crop_ref");
  if (auto d = optional_string(j, "difficulty")) {
    inst.difficulty = parse_difficulty(*d);
    if (!inst.difficulty) throw Error("unknown difficulty '" + *d + "'");
  }
  if (auto it = j.find("provenance"); it != j.end() && !it->is_null()) {
    Provenance p;
    p.pseudo = it->value("pseudo", false);
    p.detectors = it->value("detectors", std::vector<std::string>{});
    p.member_ious = it->value("member_ious", std::vector<double>{});
    inst.provenance = std::move(p);
  }
  return inst;
}

Json to_json(const DetectionSet &d) {
  Json j;
  j["detector_id"] = d.detector_id;
  j["image_ref"] = d.image_ref;
  Json regions = Json::array();
  for (const auto &r : d.regions) regions.push_back(polygon_to_json(r));
  j["regions"] = std::move(regions);
  return j;
}

DetectionSet detection_from_json(const Json &j) {
  DetectionSet d;
  d.detector_id = require_string(j, "detector_id");
  if (d.detector_id.empty()) throw Error("detector_id must be nonempty");
  d.image_ref = require_string(j, "image_ref");
  const Json &regions = require(j, "regions");
  if (!regions.is_array()) throw Error("field 'regions' must be an array");
  for (const Json &r : regions) {
    geometry::Polygon p = polygon_from_json(r);
    auto bad = geometry::polygon_violations(p);
    if (!bad.empty()) throw Error("invalid region: " + bad.front());
    d.regions.push_back(std::move(p));
  }
  return d;
}

Json to_json(const DecisionRecord &d) {
  Json j;
  j["item_id"] = d.item_id;
  j["verdict"] = std::string(to_string(d.verdict));
  j["reviewer"] = d.reviewer;
  j["timestamp"] = d.timestamp;
  if (!d.queue_id.empty()) j["queue_id"] = d.queue_id;
  return j;
}

DecisionRecord decision_from_json(const Json &j) {
  DecisionRecord d;
  d.item_id = require_string(j, "item_id");
  const std::string verdict = require_string(j, "verdict");
  auto v = parse_verdict(verdict);
  if (!v) throw Error("verdict must be accept, reject or skip, got '" + verdict + "'");
  d.verdict = *v;
  d.reviewer = require_string(j, "reviewer");
  const Json &ts = require(j, "timestamp");
  if (!ts.is_number_integer()) throw Error("field 'timestamp' must be an integer");
  d.timestamp = ts.get<std::int64_t>();
  d.queue_id = optional_string(j, "queue_id").value_or("");
  return d;
}

Json to_json(const ReviewItem &item) {
  Json j;
  j["item_id"] = item.item_id;
  j["image_ref"] = item.image_ref;
  j["label"] = item.label;
  j["reason"] = item.reason;
  j["thumbnail_ref"] = item.thumbnail_ref;
  return j;
}

ReviewItem review_item_from_json(const Json &j) {
  ReviewItem item;
  item.item_id = require_string(j, "item_id");
  item.image_ref = optional_string(j, "image_ref").value_or("");
  item.label = optional_string(j, "label").value_or("");
  item.reason = require_string(j, "reason");
  if (item.reason.empty()) throw Error("field 'reason' must be nonempty");
  item.thumbnail_ref = optional_string(j, "thumbnail_ref").value_or("");
  return item;
}

void for_each_record(const fs::path &path, ReadMode mode,
                     std::vector<LineIssue> &issues,
                     const std::function<void(std::size_t, const Json &)> &fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      fn(lineno, Json::parse(line));
    } catch (const ParseError &) {
      throw;
    } catch (const std::exception &e) {
      if (mode == ReadMode::kStrict) throw ParseError(path.string(), lineno, e.what());
      issues.push_back({lineno, e.what()});
    }
  }
}

std::size_t write_jsonl(const fs::path &path, std::span<const Json> rows) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    for (const Json &row : rows) out << row.dump() << '\n';
    out.flush();
    if (!out) throw Error("write failure on " + tmp.string());
  }
  fs::rename(tmp, path);
  return rows.size();
}

ReadResult<TextInstance> read_corpus(const fs::path &path, ReadMode mode) {
  ReadResult<TextInstance> result;
  std::unordered_set<std::string> seen;
  for_each_record(path, mode, result.issues, [&](std::size_t lineno, const Json &j) {
    TextInstance inst = instance_from_json(j);
    auto bad = validate(inst);
    if (!bad.empty()) {
      throw Error("invalid instance '" + inst.id + "': " + bad.front().field + " " +
                  bad.front().rule);
    }
    if (!seen.insert(inst.id).second) {
      throw ParseError(path.string(), lineno, "duplicate id '" + inst.id + "'");
    }
    result.records.push_back(std::move(inst));
  });
  return result;
}

std::size_t write_corpus(std::span<const TextInstance> instances, const fs::path &path) {
  std::vector<Json> rows;
  rows.reserve(instances.size());
  std::unordered_set<std::string> seen;
  for (const TextInstance &inst : instances) {
    auto bad = validate(inst);
    if (!bad.empty()) {
      throw Error("refusing to write invalid instance '" + inst.id +
                  "': " + bad.front().field + " " + bad.front().rule);
    }
    if (!seen.insert(inst.id).second) {
      throw Error("refusing to write duplicate id '" + inst.id + "'");
    }
    rows.push_back(to_json(inst));
  }
  return write_jsonl(path, rows);
}

ReadResult<DetectionSet> read_detections(const fs::path &path, ReadMode mode) {
  ReadResult<DetectionSet> result;
  for_each_record(path, mode, result.issues, [&](std::size_t, const Json &j) {
    result.records.push_back(detection_from_json(j));
  });
  return result;
}

std::vector<PredictionManifest> read_predictions(const fs::path &path) {
  std::vector<PredictionManifest> models;
  std::map<std::string, std::size_t> index;
  std::vector<LineIssue> issues;
  for_each_record(path, ReadMode::kStrict, issues, [&](std::size_t lineno, const Json &j) {
    const std::string model = require_string(j, "model_id");
    if (model.empty()) throw Error("model_id must be nonempty");
    const std::string id = require_string(j, "id");
    const std::string text = require_string(j, "text");
    auto [it, fresh] = index.try_emplace(model, models.size());
    if (fresh) models.push_back(PredictionManifest{model, {}});
    if (!models[it->second].predictions.emplace(id, text).second) {
      throw ParseError(path.string(), lineno,
                       "duplicate sample id '" + id + "' for model '" + model + "'");
    }
  });
  return models;
}

std::size_t write_predictions(const PredictionManifest &m, const fs::path &path) {
  std::vector<Json> rows;
  rows.reserve(m.predictions.size());
  for (const auto &[id, text] : m.predictions) {
    Json j;
    j["model_id"] = m.model_id;
    j["id"] = id;
    j["text"] = text;
    rows.push_back(std::move(j));
  }
  return write_jsonl(path, rows);
}

std::vector<DecisionRecord> read_decisions(const fs::path &path) {
  std::vector<DecisionRecord> out;
  std::vector<LineIssue> issues;
  for_each_record(path, ReadMode::kStrict, issues, [&](std::size_t, const Json &j) {
    out.push_back(decision_from_json(j));
  });
  return out;
}

std::vector<ReviewItem> read_review_items(const fs::path &path) {
  std::vector<ReviewItem> out;
  std::set<std::string> seen;
  std::vector<LineIssue> issues;
  for_each_record(path, ReadMode::kStrict, issues, [&](std::size_t lineno, const Json &j) {
    ReviewItem item = review_item_from_json(j);
    if (!seen.insert(item.item_id).second) {
      throw ParseError(path.string(), lineno, "duplicate item_id '" + item.item_id + "'");
    }
    out.push_back(std::move(item));
  });
  return out;
}

std::size_t write_review_items(std::span<const ReviewItem> items, const fs::path &path) {
  std::vector<Json> rows;
  rows.reserve(items.size());
  for (const ReviewItem &item : items) rows.push_back(to_json(item));
  return write_jsonl(path, rows);
}

std::map<std::string, DecisionRecord> effective_decisions(
    std::span<const DecisionRecord> log) {
  std::map<std::string, DecisionRecord> state;
  for (const DecisionRecord &d : log) {
    auto it = state.find(d.item_id);
    if (it == state.end()) {
      state.emplace(d.item_id, d);
    } else if (d.timestamp >= it->second.timestamp) {
      it->second = d;
    }
  }
  return state;
}

}  // namespace strkit
