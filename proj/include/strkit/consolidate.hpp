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

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "strkit/manifest.hpp"
#include "strkit/metrics.hpp"

namespace strkit::consolidate {

class Charset {
 public:
  Charset(std::string name, std::u32string allowed);

  /// The 95 printable ASCII characters, space included.
  static Charset printable_ascii();
  /// 91 classes: digits, both letter cases, space and 28 ASCII symbols
  /// (printable ASCII without ^ { | }).
  static Charset strict91();
  /// "default" or "strict". Throws UsageError for other names.
  static Charset by_name(const std::string &name);

  const std::string &name() const { return name_; }
  std::size_t size() const { return allowed_.size(); }
  bool contains(char32_t c) const { return allowed_.count(c) != 0; }
  /// First code point of `label` outside the set, or 0 if all are members.
  char32_t first_outside(std::string_view label) const;

 private:
  std::string name_;
  std::set<char32_t> allowed_;
};

enum class DropReason { kIgnored, kNonCharset, kDuplicate, kReferenceSource };

std::string_view to_string(DropReason r);

struct Dropped {
  TextInstance instance;
  DropReason reason;
  std::string detail;
};

struct Partition {
  std::vector<TextInstance> kept;
  std::vector<Dropped> dropped;
};

/// Drops ignored instances and labels with characters outside `charset`.
Partition apply_filters(std::span<const TextInstance> instances, const Charset &charset);

/// Exact duplicates share (image digest, polygon rounded to integer pixels,
/// label). The smallest id of each duplicate class is kept; kept instances
/// stay in input order. Throws Error when an instance has no image digest.
Partition dedup_exact(std::span<const TextInstance> instances);

/// Removes instances whose source image id is in `reference_ids`. Throws
/// Error when an instance has no source image id and the set is nonempty.
Partition dedup_by_source_id(std::span<const TextInstance> instances,
                             const std::set<std::string> &reference_ids);

/// Corpus instances whose normalized label matches any benchmark label,
/// queued for human review rather than removed.
std::vector<ReviewItem> list_label_collisions(
    std::span<const TextInstance> corpus, std::span<const TextInstance> benchmark,
    metrics::NormalizationMode mode = metrics::NormalizationMode::kWAIC);

struct CorpusSummary {
  std::size_t instance_count = 0;
  /// Distinct labels, compared exactly (case-sensitive).
  std::size_t vocabulary_count = 0;
  std::size_t vertical_count = 0;
  std::map<std::string, std::size_t> per_dataset_counts;
};

CorpusSummary summarize(std::span<const TextInstance> corpus);

Json to_json(const CorpusSummary &s);
std::string render_summary(const CorpusSummary &s);

Json drop_to_json(const Dropped &d);

}  // namespace strkit::consolidate
