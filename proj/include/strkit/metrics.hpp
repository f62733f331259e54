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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "strkit/manifest.hpp"

namespace strkit::metrics {

/// WA compares exact strings, WAIC ignores ASCII case, WAICS additionally
/// drops every character that is not an ASCII letter or digit.
enum class NormalizationMode { kWA, kWAIC, kWAICS };

std::string_view to_string(NormalizationMode m);
/// Accepts "wa", "waic", "waics" in any case. Throws UsageError otherwise.
NormalizationMode parse_mode(std::string_view s);

std::string normalize(std::string_view text, NormalizationMode mode);

/// Percentage of ground-truth ids whose normalized prediction equals the
/// normalized label. Throws Error if the manifest misses any id or `gt` is empty.
double word_accuracy(const PredictionManifest &manifest,
                     const std::map<std::string, std::string> &gt, NormalizationMode mode);

/// Accuracy on complete images minus accuracy on letter-cropped images, in
/// percentage points. Lower is better; negative when the cropped set is easier.
double incomplete_margin(double acc_full, double acc_cropped);

struct ScopeBound {
  std::int64_t count = 0;
  /// count / total, in percent.
  double percent = 0.0;
  /// count / errors scaled by the error rate rounded to one decimal place,
  /// which is how headline error-analysis figures are usually quoted.
  double headline_percent = 0.0;
};

struct SaturationScope {
  ScopeBound max_scope;
  ScopeBound min_scope;
};

/// Remaining headroom on a benchmark: errors not explained by mislabeling
/// (max), and additionally not explained by unreadable images (min).
SaturationScope saturation_scope(std::int64_t total, std::int64_t errors,
                                 std::int64_t mislabeled, std::int64_t unrecognizable);

struct MetricReport {
  std::vector<std::pair<std::string, double>> per_subset;
  double average = 0.0;
  std::optional<double> incomplete_margin;
};

/// Unweighted mean over subsets. Throws Error on empty input or accuracies
/// outside [0, 100].
MetricReport aggregate_report(std::vector<std::pair<std::string, double>> per_subset);

/// Half-up rounding to one decimal place, as printed in result tables.
double round1(double v);

Json to_json(const MetricReport &r);

/// Aligned text table: one row per model, subset columns, then Avg and
/// (when any row has one) the incomplete margin.
std::string render_table(std::span<const std::pair<std::string, MetricReport>> rows);

}  // namespace strkit::metrics
