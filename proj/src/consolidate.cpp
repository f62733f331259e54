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

#include "strkit/consolidate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "strkit/error.hpp"
#include "strkit/geometry.hpp"
#include "strkit/text.hpp"

namespace strkit::consolidate {

Charset::Charset(std::string name, std::u32string allowed)
    : name_(std::move(name)), allowed_(allowed.begin(), allowed.end()) {
  if (allowed_.empty()) throw UsageError("charset '" + name_ + "' is empty");
}

Charset Charset::printable_ascii() {
  std::u32string chars;
  for (char32_t c = 0x20; c <= 0x7E; ++c) chars.push_back(c);
  return Charset("default", chars);
}

Charset Charset::strict91() {
  std::u32string chars;
  for (char32_t c = 0x20; c <= 0x7E; ++c) {
    if (c != U'^' && c != U'{' && c != U'|' && c != U'}') chars.push_back(c);
  }
  return Charset("strict", chars);
}

Charset Charset::by_name(const std::string &name) {
  if (name == "default") return printable_ascii();
  if (name == "strict") return strict91();
  throw UsageError("unknown charset profile '" + name + "' (expected default or strict)");
}

char32_t Charset::first_outside(std::string_view label) const {
  for (char32_t c : text::decode_utf8(label)) {
    if (!contains(c)) return c;
  }
  return 0;
}

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::kIgnored: return "ignored";
    case DropReason::kNonCharset: return "non-charset";
    case DropReason::kDuplicate: return "duplicate";
    case DropReason::kReferenceSource: return "reference-source";
  }
  return "unknown";
}

Partition apply_filters(std::span<const TextInstance> instances, const Charset &charset) {
  Partition out;
  for (const TextInstance &inst : instances) {
    if (inst.ignored) {
      out.dropped.push_back({inst, DropReason::kIgnored, ""});
    } else if (char32_t bad = charset.first_outside(inst.label)) {
      out.dropped.push_back({inst, DropReason::kNonCharset,
                             "character '" + text::encode_utf8(std::u32string(1, bad)) +
                                 "' not in charset " + charset.name()});
    } else {
      out.kept.push_back(inst);
    }
  }
  return out;
}

Partition dedup_exact(std::span<const TextInstance> instances) {
  using Key = std::tuple<std::string, std::vector<long>, std::string>;
  std::map<Key, std::size_t> owner;  // key -> index of the smallest id seen
  std::vector<Key> keys;
  keys.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const TextInstance &inst = instances[i];
    if (!inst.image_digest) throw Error("instance '" + inst.id + "' has no image digest");
    std::vector<long> coords;
    for (const auto &v : inst.polygon.vertices) {
      coords.push_back(std::lround(v.x));
      coords.push_back(std::lround(v.y));
    }
    Key key{*inst.image_digest, std::move(coords), inst.label};
    auto [it, fresh] = owner.try_emplace(key, i);
    if (!fresh && inst.id < instances[it->second].id) it->second = i;
    keys.push_back(std::move(key));
  }
  Partition out;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const std::size_t keeper = owner.at(keys[i]);
    if (keeper == i) {
      out.kept.push_back(instances[i]);
    } else {
      out.dropped.push_back(
          {instances[i], DropReason::kDuplicate, "duplicate of " + instances[keeper].id});
    }
  }
  return out;
}

Partition dedup_by_source_id(std::span<const TextInstance> instances,
                             const std::set<std::string> &reference_ids) {
  Partition out;
  for (const TextInstance &inst : instances) {
    if (reference_ids.empty()) {
      out.kept.push_back(inst);
      continue;
    }
    if (!inst.source_image_id) {
      throw Error("instance '" + inst.id + "' has no source image id");
    }
    if (reference_ids.count(*inst.source_image_id)) {
      out.dropped.push_back({inst, DropReason::kReferenceSource,
                             "source image " + *inst.source_image_id + " is in the reference set"});
    } else {
      out.kept.push_back(inst);
    }
  }
  return out;
}

std::vector<ReviewItem> list_label_collisions(std::span<const TextInstance> corpus,
                                              std::span<const TextInstance> benchmark,
                                              metrics::NormalizationMode mode) {
  std::unordered_map<std::string, const TextInstance *> bench_labels;
  for (const TextInstance &b : benchmark) {
    if (b.label.empty()) continue;
    bench_labels.try_emplace(metrics::normalize(b.label, mode), &b);
  }
  std::vector<ReviewItem> out;
  for (const TextInstance &inst : corpus) {
    if (inst.label.empty()) continue;
    auto it = bench_labels.find(metrics::normalize(inst.label, mode));
    if (it == bench_labels.end()) continue;
    ReviewItem item;
    item.item_id = inst.id;
    item.image_ref = inst.crop_ref.value_or(inst.image_ref);
    item.label = inst.label;
    item.reason = "label matches benchmark instance " + it->second->id + " (\"" +
                  it->second->label + "\")";
    item.thumbnail_ref = inst.image_digest.value_or("");
    out.push_back(std::move(item));
  }
  return out;
}

CorpusSummary summarize(std::span<const TextInstance> corpus) {
  CorpusSummary s;
  std::set<std::string> vocab;
  for (const TextInstance &inst : corpus) {
    ++s.instance_count;
    if (!inst.label.empty()) vocab.insert(inst.label);
    if (geometry::is_vertical_instance(inst.polygon, inst.label)) ++s.vertical_count;
    ++s.per_dataset_counts[inst.source_dataset];
  }
  s.vocabulary_count = vocab.size();
  return s;
}

Json to_json(const CorpusSummary &s) {
  Json j;
  j["instance_count"] = s.instance_count;
  j["vocabulary_count"] = s.vocabulary_count;
  j["vertical_count"] = s.vertical_count;
  Json per = Json::object();
  for (const auto &[name, n] : s.per_dataset_counts) per[name] = n;
  j["per_dataset_counts"] = std::move(per);
  return j;
}

std::string render_summary(const CorpusSummary &s) {
  std::ostringstream out;
  out << "instances:          " << s.instance_count << '\n'
      << "vocabularies:       " << s.vocabulary_count << '\n'
      << "vertical instances: " << s.vertical_count << '\n';
  for (const auto &[name, n] : s.per_dataset_counts) out << "  " << name << ": " << n << '\n';
  return out.str();
}

Json drop_to_json(const Dropped &d) {
  Json j;
  j["id"] = d.instance.id;
  j["reason"] = std::string(to_string(d.reason));
  if (!d.detail.empty()) j["detail"] = d.detail;
  return j;
}

}  // namespace strkit::consolidate
