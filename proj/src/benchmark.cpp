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

#include "strkit/benchmark.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "strkit/error.hpp"
#include "strkit/parallel.hpp"
#include "strkit/rng.hpp"
#include "strkit/text.hpp"

namespace strkit::benchmark {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::string trim_copy(const std::string &s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim_copy(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::size_t index_of(Difficulty d) { return static_cast<std::size_t>(d); }

/// Partial Fisher-Yates: the first `count` entries of `pool` become the draw.
void draw(std::vector<std::string> &pool, std::size_t count, std::mt19937_64 &rng) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + uniform_below(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
}

}  // namespace

std::string_view to_string(SubsetSource s) {
  switch (s) {
    case SubsetSource::kReviewed: return "reviewed";
    case SubsetSource::kStratified: return "stratified";
    case SubsetSource::kMutation: return "mutation";
  }
  return "?";
}

void BenchmarkSpec::validate() const {
  std::set<std::string> names;
  for (const SubsetSpec &s : subsets) {
    if (s.name.empty()) throw UsageError("subset with empty name");
    if (!names.insert(s.name).second) throw UsageError("duplicate subset name '" + s.name + "'");
    const bool stochastic = s.source != SubsetSource::kReviewed;
    if (stochastic && !s.seed) throw UsageError("subset '" + s.name + "' needs a seed");
    const bool needs_target = s.source == SubsetSource::kMutation ||
                              (s.source == SubsetSource::kStratified && s.stratify == Stratify::kEven);
    if (needs_target && s.target_size < 1) {
      throw UsageError("subset '" + s.name + "' needs target_size >= 1");
    }
    if (s.source == SubsetSource::kStratified && s.stratify == Stratify::kFraction &&
        !(s.fraction > 0.0 && s.fraction <= 1.0)) {
      throw UsageError("subset '" + s.name + "' fraction must lie in (0, 1]");
    }
    if (s.source == SubsetSource::kReviewed && s.candidates.empty()) {
      throw UsageError("reviewed subset '" + s.name + "' needs a candidates file");
    }
  }
}

BenchmarkSpec parse_spec(const std::string &ini_text, const fs::path &base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(ini_text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error &e) {
    throw UsageError(std::string("benchmark spec: ") + e.what());
  }
  auto resolve = [&](const std::string &p) {
    fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  BenchmarkSpec spec;
  for (const auto &[section, body] : tree) {
    if (section == "benchmark") {
      for (const std::string &f : split_list(body.get<std::string>("decisions", ""))) {
        spec.decision_files.push_back(resolve(f));
      }
      continue;
    }
    if (section.rfind("subset:", 0) != 0) {
      throw UsageError("unknown section [" + section + "] in benchmark spec");
    }
    SubsetSpec s;
    s.name = section.substr(7);
    const std::string source = body.get<std::string>("source", "");
    if (source == "reviewed") {
      s.source = SubsetSource::kReviewed;
    } else if (source == "stratified") {
      s.source = SubsetSource::kStratified;
    } else if (source == "mutation") {
      s.source = SubsetSource::kMutation;
    } else {
      throw UsageError("subset '" + s.name + "' has unknown source '" + source + "'");
    }
    try {
      s.target_size = body.get<std::size_t>("target_size", 0);
      if (body.count("seed")) s.seed = body.get<std::uint64_t>("seed");
      s.fraction = body.get<double>("fraction", 0.2);
    } catch (const pt::ptree_bad_data &e) {
      throw UsageError("subset '" + s.name + "': " + e.what());
    }
    const std::string stratify = body.get<std::string>("stratify", "even");
    if (stratify == "even") {
      s.stratify = Stratify::kEven;
    } else if (stratify == "fraction") {
      s.stratify = Stratify::kFraction;
    } else {
      throw UsageError("subset '" + s.name + "' has unknown stratify '" + stratify + "'");
    }
    if (auto c = body.get_optional<std::string>("candidates")) s.candidates = resolve(*c);
    s.queue_id = body.get<std::string>("queue", s.name);
    spec.subsets.push_back(std::move(s));
  }
  return spec;
}

BenchmarkSpec load_spec(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open benchmark spec " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path.parent_path());
}

std::map<Difficulty, std::size_t> even_quotas(const std::map<Difficulty, std::size_t> &available,
                                              std::size_t target) {
  constexpr std::size_t kLevels = std::size(kAllDifficulties);
  std::array<std::size_t, kLevels> cap{};
  std::size_t total = 0;
  for (Difficulty d : kAllDifficulties) {
    auto it = available.find(d);
    cap[index_of(d)] = it == available.end() ? 0 : it->second;
    total += cap[index_of(d)];
  }
  if (target > total) {
    throw Error("target " + std::to_string(target) + " exceeds the " + std::to_string(total) +
                " available instances");
  }
  std::array<std::size_t, kLevels> quota{};
  for (std::size_t i = 0; i < kLevels; ++i) quota[i] = target / kLevels + (i < target % kLevels);

  for (;;) {
    std::size_t deficit = 0;
    for (std::size_t i = 0; i < kLevels; ++i) {
      if (quota[i] > cap[i]) {
        deficit += quota[i] - cap[i];
        quota[i] = cap[i];
      }
    }
    if (deficit == 0) break;
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < kLevels; ++i)
      if (quota[i] < cap[i]) open.push_back(i);
    const std::size_t share = deficit / open.size();
    const std::size_t extra = deficit % open.size();
    for (std::size_t k = 0; k < open.size(); ++k) quota[open[k]] += share + (k < extra);
  }

  std::map<Difficulty, std::size_t> out;
  for (Difficulty d : kAllDifficulties) out[d] = quota[index_of(d)];
  return out;
}

SubsetManifest stratified_sample(std::span<const TextInstance> corpus, std::size_t target,
                                 std::uint64_t seed, Stratify mode, double fraction,
                                 const std::vector<std::string> &exclude) {
  const std::unordered_set<std::string> excluded(exclude.begin(), exclude.end());
  std::map<Difficulty, std::vector<std::string>> pools;
  for (Difficulty d : kAllDifficulties) pools[d];
  for (const TextInstance &inst : corpus) {
    if (!inst.difficulty) throw Error("instance '" + inst.id + "' has no difficulty level");
    if (!excluded.count(inst.id)) pools[*inst.difficulty].push_back(inst.id);
  }

  std::map<Difficulty, std::size_t> quotas;
  if (mode == Stratify::kEven) {
    if (target < 1) throw Error("stratified target must be at least 1");
    std::map<Difficulty, std::size_t> available;
    for (auto &[level, ids] : pools) {
      if (ids.empty()) {
        throw Error("difficulty level '" + std::string(to_string(level)) +
                    "' has no instances to sample from");
      }
      available[level] = ids.size();
    }
    quotas = even_quotas(available, target);
  } else {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw Error("fraction must lie in (0, 1]");
    for (auto &[level, ids] : pools) {
      quotas[level] = static_cast<std::size_t>(std::floor(fraction * ids.size() + 0.5));
    }
  }

  SubsetManifest m;
  m.source = SubsetSource::kStratified;
  m.seed = seed;
  for (auto &[level, ids] : pools) {
    std::sort(ids.begin(), ids.end());
    std::mt19937_64 rng(derive_seed(seed, to_string(level)));
    draw(ids, quotas[level], rng);
    m.per_level[level] = ids.size();
    m.ids.insert(m.ids.end(), ids.begin(), ids.end());
  }
  return m;
}

imaging::Side choose_side(std::uint64_t seed, const std::string &id) {
  std::mt19937_64 rng(derive_seed(seed, id));
  return uniform_below(rng, 2) == 0 ? imaging::Side::kLeft : imaging::Side::kRight;
}

std::string mutated_id(const std::string &original_id) { return original_id + "#incomplete"; }

MutationResult mutate_incomplete(std::span<const MutationInput> inputs, std::uint64_t seed,
                                 unsigned workers) {
  struct Slot {
    std::optional<Mutated> mutated;
    std::string skip_reason;
  };
  std::vector<Slot> slots(inputs.size());
  parallel_for(inputs.size(), workers, [&](std::size_t i) {
    const TextInstance &src = inputs[i].instance;
    if (src.difficulty && *src.difficulty != Difficulty::kEasy) {
      slots[i].skip_reason = "not in the easy level";
      return;
    }
    if (text::length(src.label) < 2) {
      slots[i].skip_reason = "label shorter than 2 characters";
      return;
    }
    const imaging::Side side = choose_side(seed, src.id);
    try {
      imaging::StripResult strip = imaging::crop_char_strip(inputs[i].image, src.label, side);
      Mutated m;
      m.instance = src;
      m.instance.id = mutated_id(src.id);
      m.instance.label = std::move(strip.label);
      m.instance.difficulty.reset();
      m.instance.crop_ref.reset();
      m.image = std::move(strip.image);
      m.original_id = src.id;
      m.side = side;
      slots[i].mutated = std::move(m);
    } catch (const Error &e) {
      slots[i].skip_reason = e.what();
    }
  });

  MutationResult out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].mutated) {
      out.mutated.push_back(std::move(*slots[i].mutated));
    } else {
      out.skipped.push_back({inputs[i].instance.id, slots[i].skip_reason});
    }
  }
  return out;
}

SubsetManifest select_mutation_candidates(std::span<const TextInstance> corpus,
                                          std::size_t target, std::uint64_t seed,
                                          const std::vector<std::string> &exclude) {
  const std::unordered_set<std::string> excluded(exclude.begin(), exclude.end());
  std::vector<std::string> pool;
  for (const TextInstance &inst : corpus) {
    if (inst.difficulty == Difficulty::kEasy && text::length(inst.label) >= 2 &&
        !excluded.count(inst.id)) {
      pool.push_back(inst.id);
    }
  }
  if (target > pool.size()) {
    throw Error("mutation target " + std::to_string(target) + " exceeds the " +
                std::to_string(pool.size()) + " eligible easy instances");
  }
  std::sort(pool.begin(), pool.end());
  std::mt19937_64 rng(derive_seed(seed, "incomplete"));
  draw(pool, target, rng);
  SubsetManifest m;
  m.source = SubsetSource::kMutation;
  m.seed = seed;
  m.ids = std::move(pool);
  return m;
}

AssembleResult assemble(const BenchmarkSpec &spec, const AssembleInputs &inputs) {
  spec.validate();
  std::unordered_map<std::string, const TextInstance *> by_id;
  for (const TextInstance &inst : inputs.corpus) {
    if (!by_id.emplace(inst.id, &inst).second) {
      throw Error("corpus contains duplicate id '" + inst.id + "'");
    }
  }

  AssembleResult result;
  std::vector<std::string> taken;
  std::unordered_set<std::string> taken_set;
  Json subsets_json = Json::array();

  for (const SubsetSpec &s : spec.subsets) {
    SubsetManifest m;
    m.name = s.name;
    m.source = s.source;
    switch (s.source) {
      case SubsetSource::kReviewed: {
        auto cand = inputs.candidates.find(s.name);
        if (cand == inputs.candidates.end()) {
          throw Error("no candidate list loaded for reviewed subset '" + s.name + "'");
        }
        std::vector<DecisionRecord> relevant;
        for (const DecisionRecord &d : inputs.decisions) {
          if (d.queue_id.empty() || d.queue_id == s.queue_id) relevant.push_back(d);
        }
        const auto verdicts = effective_decisions(relevant);
        std::vector<std::string> undecided;
        for (const ReviewItem &item : cand->second) {
          auto v = verdicts.find(item.item_id);
          if (v == verdicts.end()) {
            undecided.push_back(item.item_id);
            continue;
          }
          if (v->second.verdict != Verdict::kAccept) continue;
          if (!by_id.count(item.item_id)) {
            throw Error("accepted item '" + item.item_id + "' of subset '" + s.name +
                        "' is not in the corpus");
          }
          m.ids.push_back(item.item_id);
        }
        if (!undecided.empty()) {
          throw Error("reviewed subset '" + s.name + "' has " + std::to_string(undecided.size()) +
                      " candidates without a decision (first: " + undecided.front() + ")");
        }
        break;
      }
      case SubsetSource::kStratified: {
        std::vector<TextInstance> pool(inputs.corpus.begin(), inputs.corpus.end());
        m = stratified_sample(pool, s.target_size, *s.seed, s.stratify, s.fraction, taken);
        m.name = s.name;
        break;
      }
      case SubsetSource::kMutation: {
        m = select_mutation_candidates(inputs.corpus, s.target_size, *s.seed, taken);
        m.name = s.name;
        break;
      }
    }
    for (const std::string &id : m.ids) {
      if (taken_set.insert(id).second) taken.push_back(id);
    }

    Json sj;
    sj["name"] = m.name;
    sj["source"] = std::string(to_string(m.source));
    sj["count"] = m.ids.size();
    if (s.target_size) sj["target_size"] = s.target_size;
    if (m.seed) sj["seed"] = *m.seed;
    if (s.source == SubsetSource::kStratified) {
      sj["stratify"] = s.stratify == Stratify::kEven ? "even" : "fraction";
      if (s.stratify == Stratify::kFraction) sj["fraction"] = s.fraction;
      Json levels = Json::object();
      for (const auto &[level, n] : m.per_level) levels[std::string(to_string(level))] = n;
      sj["per_level"] = std::move(levels);
    }
    if (s.source == SubsetSource::kReviewed) sj["queue_id"] = s.queue_id;
    subsets_json.push_back(std::move(sj));
    result.subsets.push_back(std::move(m));
  }

  for (const TextInstance &inst : inputs.corpus) {
    if (!taken_set.count(inst.id)) result.train.push_back(inst);
  }
  for (const TextInstance &inst : result.train) {
    if (taken_set.count(inst.id)) throw Error("training split shares id '" + inst.id + "'");
  }

  Json digests = Json::object();
  for (const auto &[file, digest] : inputs.decision_digests) digests[file] = digest;
  result.provenance["subsets"] = std::move(subsets_json);
  result.provenance["decision_digests"] = std::move(digests);
  result.provenance["corpus_count"] = inputs.corpus.size();
  result.provenance["benchmark_count"] = taken.size();
  result.provenance["train_count"] = result.train.size();
  return result;
}

Json to_json(const SubsetManifest &m) {
  Json j;
  j["name"] = m.name;
  j["source"] = std::string(to_string(m.source));
  if (m.seed) j["seed"] = *m.seed;
  j["ids"] = m.ids;
  return j;
}

void write_subset(const SubsetManifest &m, const fs::path &path) {
  std::vector<Json> rows;
  rows.reserve(m.ids.size());
  for (const std::string &id : m.ids) {
    Json j;
    j["subset"] = m.name;
    j["id"] = id;
    rows.push_back(std::move(j));
  }
  write_jsonl(path, rows);
}

std::vector<std::string> read_subset_ids(const fs::path &path) {
  std::vector<std::string> ids;
  std::vector<LineIssue> issues;
  for_each_record(path, ReadMode::kStrict, issues, [&](std::size_t, const Json &j) {
    if (!j.contains("id") || !j["id"].is_string()) throw Error("subset line needs a string 'id'");
    ids.push_back(j["id"].get<std::string>());
  });
  return ids;
}

}  // namespace strkit::benchmark
