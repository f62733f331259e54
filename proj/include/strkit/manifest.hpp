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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "strkit/geometry.hpp"

namespace strkit {

using Json = nlohmann::ordered_json;

/// Five-way difficulty class assigned by ensemble voting, hardest first.
enum class Difficulty { kChallenging, kHard, kMedium, kNormal, kEasy };

inline constexpr Difficulty kAllDifficulties[] = {
    Difficulty::kChallenging, Difficulty::kHard, Difficulty::kMedium,
    Difficulty::kNormal, Difficulty::kEasy};

std::string_view to_string(Difficulty d);
std::optional<Difficulty> parse_difficulty(std::string_view s);

/// Origin of machine-harvested instances.
struct Provenance {
  bool pseudo = false;
  std::vector<std::string> detectors;
  std::vector<double> member_ious;

  friend bool operator==(const Provenance &, const Provenance &) = default;
};

struct TextInstance {
  std::string id;
  std::string source_dataset;
  std::string image_ref;
  std::optional<std::string> image_digest;
  std::optional<std::string> source_image_id;
  geometry::Polygon polygon;
  std::string label;
  bool ignored = false;
  std::string language = "latin";
  std::optional<std::string> crop_ref;
  std::optional<Difficulty> difficulty;
  std::optional<Provenance> provenance;

  bool is_pseudo() const { return provenance && provenance->pseudo; }

  friend bool operator==(const TextInstance &, const TextInstance &) = default;
};

struct DetectionSet {
  std::string detector_id;
  std::string image_ref;
  std::vector<geometry::Polygon> regions;
};

struct PredictionManifest {
  std::string model_id;
  std::map<std::string, std::string> predictions;

  /// nullptr when the sample is absent.
  const std::string *find(const std::string &sample_id) const;
};

enum class Verdict { kAccept, kReject, kSkip };

std::string_view to_string(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view s);

struct DecisionRecord {
  std::string item_id;
  Verdict verdict = Verdict::kSkip;
  std::string reviewer;
  std::int64_t timestamp = 0;
  std::string queue_id;

  friend bool operator==(const DecisionRecord &, const DecisionRecord &) = default;
};

/// One item awaiting human review.
struct ReviewItem {
  std::string item_id;
  std::string image_ref;
  std::string label;
  std::string reason;
  std::string thumbnail_ref;
};

struct Violation {
  std::string field;
  std::string rule;
};

/// Empty iff every TextInstance invariant holds.
std::vector<Violation> validate(const TextInstance &inst);

enum class ReadMode { kStrict, kLenient };

struct LineIssue {
  std::size_t line = 0;
  std::string message;
};

template <typename T>
struct ReadResult {
  std::vector<T> records;
  /// Lines skipped under lenient mode.
  std::vector<LineIssue> issues;
};

// Record <-> JSON. from_json throws Error with a field-level message.
Json to_json(const TextInstance &inst);
TextInstance instance_from_json(const Json &j);
Json to_json(const DetectionSet &d);
DetectionSet detection_from_json(const Json &j);
Json to_json(const DecisionRecord &d);
DecisionRecord decision_from_json(const Json &j);
Json to_json(const ReviewItem &item);
ReviewItem review_item_from_json(const Json &j);
Json polygon_to_json(const geometry::Polygon &p);
geometry::Polygon polygon_from_json(const Json &j);

/// Calls `fn(line_number, json)` for each non-blank line. Parse failures throw
/// ParseError in strict mode and are collected into `issues` otherwise.
void for_each_record(const std::filesystem::path &path, ReadMode mode,
                     std::vector<LineIssue> &issues,
                     const std::function<void(std::size_t, const Json &)> &fn);

/// Writes one compact JSON object per line into a temp file and renames it
/// over `path` once every line has been produced.
std::size_t write_jsonl(const std::filesystem::path &path, std::span<const Json> rows);

ReadResult<TextInstance> read_corpus(const std::filesystem::path &path,
                                     ReadMode mode = ReadMode::kStrict);

/// Throws Error naming the first invalid instance before anything is written.
std::size_t write_corpus(std::span<const TextInstance> instances,
                         const std::filesystem::path &path);

ReadResult<DetectionSet> read_detections(const std::filesystem::path &path,
                                         ReadMode mode = ReadMode::kStrict);

/// Lines are {"model_id", "id", "text"}; a file may hold several models.
std::vector<PredictionManifest> read_predictions(const std::filesystem::path &path);
std::size_t write_predictions(const PredictionManifest &m,
                              const std::filesystem::path &path);

std::vector<DecisionRecord> read_decisions(const std::filesystem::path &path);
std::vector<ReviewItem> read_review_items(const std::filesystem::path &path);
std::size_t write_review_items(std::span<const ReviewItem> items,
                               const std::filesystem::path &path);

/// Reduces a decision log to the effective verdict per item: the latest
/// timestamp wins, ties go to the later log entry.
std::map<std::string, DecisionRecord> effective_decisions(
    std::span<const DecisionRecord> log);

}  // namespace strkit
