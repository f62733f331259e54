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

#include "strkit/difficulty.hpp"

#include <numeric>

#include "strkit/error.hpp"
#include "strkit/parallel.hpp"

namespace strkit::difficulty {

namespace {
constexpr int kReferenceModels = 13;
constexpr std::array<int, 4> kReferenceBounds{0, 4, 7, 10};
}  // namespace

int VoteVector::sum() const { return std::accumulate(bits.begin(), bits.end(), 0); }

VoteVector vote_vector(const std::string &sample_id, const std::string &gt,
                       std::span<const PredictionManifest> manifests,
                       metrics::NormalizationMode mode) {
  VoteVector v;
  v.sample_id = sample_id;
  const std::string target = metrics::normalize(gt, mode);
  for (const PredictionManifest &m : manifests) {
    const std::string *pred = m.find(sample_id);
    if (!pred) {
      throw Error("model '" + m.model_id + "' has no prediction for sample '" + sample_id + "'");
    }
    v.bits.push_back(metrics::normalize(*pred, mode) == target ? 1 : 0);
    v.model_ids.push_back(m.model_id);
  }
  return v;
}

std::array<int, 4> level_bounds(int model_count) {
  if (model_count < 1) throw Error("difficulty voting needs at least one model");
  std::array<int, 4> out{};
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int num = model_count * kReferenceBounds[i];
    out[i] = (num + kReferenceModels - 1) / kReferenceModels;
  }
  return out;
}

Difficulty assign_level(int correct, int model_count) {
  if (correct < 0 || correct > model_count) {
    throw Error("vote sum " + std::to_string(correct) + " outside [0, " +
                std::to_string(model_count) + "]");
  }
  const auto bounds = level_bounds(model_count);
  if (correct <= bounds[0]) return Difficulty::kChallenging;
  if (correct <= bounds[1]) return Difficulty::kHard;
  if (correct <= bounds[2]) return Difficulty::kMedium;
  if (correct <= bounds[3]) return Difficulty::kNormal;
  return Difficulty::kEasy;
}

Difficulty assign_level(const VoteVector &v) {
  return assign_level(v.sum(), static_cast<int>(v.bits.size()));
}

std::vector<TextInstance> assign_difficulty(std::span<const TextInstance> corpus,
                                            std::span<const PredictionManifest> manifests,
                                            metrics::NormalizationMode mode, unsigned workers) {
  if (manifests.empty()) throw Error("difficulty voting needs at least one prediction manifest");
  std::vector<TextInstance> out(corpus.begin(), corpus.end());
  parallel_for(out.size(), workers, [&](std::size_t i) {
    out[i].difficulty = assign_level(vote_vector(out[i].id, out[i].label, manifests, mode));
  });
  return out;
}

std::map<Difficulty, std::size_t> level_counts(std::span<const TextInstance> corpus) {
  std::map<Difficulty, std::size_t> counts;
  for (Difficulty d : kAllDifficulties) counts[d] = 0;
  for (const TextInstance &inst : corpus) {
    if (!inst.difficulty) throw Error("instance '" + inst.id + "' has no difficulty level");
    ++counts[*inst.difficulty];
  }
  return counts;
}

std::map<Difficulty, double> level_distribution(std::span<const TextInstance> corpus) {
  if (corpus.empty()) throw Error("level distribution of an empty corpus");
  std::map<Difficulty, double> out;
  for (const auto &[level, n] : level_counts(corpus)) {
    out[level] = static_cast<double>(n) / static_cast<double>(corpus.size());
  }
  return out;
}

}  // namespace strkit::difficulty
