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

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "strkit/manifest.hpp"
#include "strkit/metrics.hpp"

namespace strkit::difficulty {

/// Per-sample correctness across an ensemble: bits[i] is 1 when model i read
/// the sample correctly.
struct VoteVector {
  std::string sample_id;
  std::vector<std::uint8_t> bits;
  std::vector<std::string> model_ids;

  int sum() const;
};

/// Throws Error naming the first model whose manifest lacks `sample_id`.
VoteVector vote_vector(const std::string &sample_id, const std::string &gt,
                       std::span<const PredictionManifest> manifests,
                       metrics::NormalizationMode mode = metrics::NormalizationMode::kWAICS);

/// Inclusive upper vote counts for challenging, hard, medium and normal with N
/// models: ceil(N * {0, 4, 7, 10} / 13). Sums above the last bound are easy.
std::array<int, 4> level_bounds(int model_count);

/// With 13 models: 0 challenging, 1-4 hard, 5-7 medium, 8-10 normal,
/// 11-13 easy.
Difficulty assign_level(int correct, int model_count);
Difficulty assign_level(const VoteVector &v);

/// Sets `difficulty` on every instance. Output order matches input.
std::vector<TextInstance> assign_difficulty(std::span<const TextInstance> corpus,
                                            std::span<const PredictionManifest> manifests,
                                            metrics::NormalizationMode mode,
                                            unsigned workers = 1);

/// Fraction of instances per level, all five levels present. Throws Error for
/// an empty corpus or an instance without a level.
std::map<Difficulty, double> level_distribution(std::span<const TextInstance> corpus);

std::map<Difficulty, std::size_t> level_counts(std::span<const TextInstance> corpus);

}  // namespace strkit::difficulty
