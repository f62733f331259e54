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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strkit/imaging.hpp"
#include "strkit/manifest.hpp"

namespace strkit::benchmark {

enum class SubsetSource { kReviewed, kStratified, kMutation };

std::string_view to_string(SubsetSource s);

/// How a stratified subset splits its draws across difficulty levels.
enum class Stratify {
  /// target_size / 5 per level; shortfalls move to the other levels.
  kEven,
  /// round(fraction * population) from every level.
  kFraction,
};

struct SubsetSpec {
  std::string name;
  SubsetSource source = SubsetSource::kStratified;
  /// Required for stratified (even) and mutation subsets; informational for
  /// reviewed ones.
  std::size_t target_size = 0;
  std::optional<std::uint64_t> seed;
  Stratify stratify = Stratify::kEven;
  double fraction = 0.2;
  /// Review queue file holding the candidates of a reviewed subset.
  std::filesystem::path candidates;
  /// Decisions tagged with another queue id are ignored. Defaults to `name`.
  std::string queue_id;
};

struct BenchmarkSpec {
  std::vector<SubsetSpec> subsets;
  std::vector<std::filesystem::path> decision_files;

  /// Throws UsageError on duplicate names, zero targets or missing seeds.
  void validate() const;
};

/// INI layout: an optional `[benchmark]` section with `decisions = a, b` and
/// one `[subset:<name>]` section per subset with `source`, `target_size`,
/// `seed`, `stratify`, `fraction`, `candidates` and `queue`. Relative paths
/// resolve against the file's directory. The result is not validated, so callers
/// can fill in defaults (such as a global seed) before calling validate().
BenchmarkSpec load_spec(const std::filesystem::path &path);
BenchmarkSpec parse_spec(const std::string &ini_text, const std::filesystem::path &base_dir);

struct SubsetManifest {
  std::string name;
  std::vector<std::string> ids;
  SubsetSource source = SubsetSource::kStratified;
  std::optional<std::uint64_t> seed;
  /// Draws per difficulty level, for stratified subsets.
  std::map<Difficulty, std::size_t> per_level;
};

/// Per-level draw counts for an even split of `target` with shortfall
/// redistribution: every level gets target / 5 (the remainder going to the
/// hardest levels first); a level that cannot fill its share gives all it
/// has and the deficit is split evenly across levels with spare capacity.
std::map<Difficulty, std::size_t> even_quotas(const std::map<Difficulty, std::size_t> &available,
                                              std::size_t target);

/// Seeded draw without replacement per difficulty level. Instances in
/// `exclude` are never drawn. Levels are processed in id order, so the result
/// depends only on (corpus contents, target, seed).
SubsetManifest stratified_sample(std::span<const TextInstance> corpus, std::size_t target,
                                 std::uint64_t seed, Stratify mode = Stratify::kEven,
                                 double fraction = 0.2,
                                 const std::vector<std::string> &exclude = {});

/// Side whose character is cropped away for `id` under `seed`.
imaging::Side choose_side(std::uint64_t seed, const std::string &id);

struct MutationInput {
  TextInstance instance;
  imaging::RasterImage image;
};

struct Mutated {
  TextInstance instance;
  imaging::RasterImage image;
  std::string original_id;
  imaging::Side side = imaging::Side::kLeft;
};

struct Skipped {
  std::string id;
  std::string reason;
};

struct MutationResult {
  std::vector<Mutated> mutated;
  std::vector<Skipped> skipped;
};

/// Id given to the mutated copy of `original_id`.
std::string mutated_id(const std::string &original_id);

/// Crops the first or last character off each input. Inputs that are not easy
/// or whose label is too short are skipped with a reason.
MutationResult mutate_incomplete(std::span<const MutationInput> inputs, std::uint64_t seed,
                                 unsigned workers = 1);

/// Seeded choice of `target` easy instances with labels of at least two
/// characters.
SubsetManifest select_mutation_candidates(std::span<const TextInstance> corpus,
                                          std::size_t target, std::uint64_t seed,
                                          const std::vector<std::string> &exclude = {});

struct AssembleInputs {
  std::span<const TextInstance> corpus;
  std::span<const DecisionRecord> decisions;
  /// Candidate items per reviewed subset name.
  std::map<std::string, std::vector<ReviewItem>> candidates;
  /// Digest per decision file, recorded for reproducibility.
  std::map<std::string, std::string> decision_digests;
};

struct AssembleResult {
  std::vector<SubsetManifest> subsets;
  std::vector<TextInstance> train;
  Json provenance;
};

/// Builds every subset in declaration order; stochastic subsets never reuse
/// ids picked by an earlier subset. The training split is the corpus minus
/// all benchmark ids.
AssembleResult assemble(const BenchmarkSpec &spec, const AssembleInputs &inputs);

Json to_json(const SubsetManifest &m);
/// One `{"subset", "id"}` line per member.
void write_subset(const SubsetManifest &m, const std::filesystem::path &path);
/// Ids listed in a subset file, in file order.
std::vector<std::string> read_subset_ids(const std::filesystem::path &path);

}  // namespace strkit::benchmark
