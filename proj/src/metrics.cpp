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

#include "strkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "strkit/error.hpp"
#include "strkit/text.hpp"

namespace strkit::metrics {

std::string_view to_string(NormalizationMode m) {
  switch (m) {
    case NormalizationMode::kWA: return "WA";
    case NormalizationMode::kWAIC: return "WAIC";
    case NormalizationMode::kWAICS: return "WAICS";
  }
  return "?";
}

NormalizationMode parse_mode(std::string_view s) {
  const std::string lower = text::ascii_lower(s);
  if (lower == "wa") return NormalizationMode::kWA;
  if (lower == "waic") return NormalizationMode::kWAIC;
  if (lower == "waics") return NormalizationMode::kWAICS;
  throw UsageError("unknown metric mode '" + std::string(s) + "' (expected wa, waic or waics)");
}

std::string normalize(std::string_view s, NormalizationMode mode) {
  switch (mode) {
    case NormalizationMode::kWA:
      return std::string(s);
    case NormalizationMode::kWAIC:
      return text::ascii_lower(s);
    case NormalizationMode::kWAICS: {
      std::string out;
      out.reserve(s.size());
      for (char c : s) {
        if (c >= 'A' && c <= 'Z') {
          out.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
          out.push_back(c);
        }
      }
      return out;
    }
  }
  return std::string(s);
}

double word_accuracy(const PredictionManifest &manifest,
                     const std::map<std::string, std::string> &gt, NormalizationMode mode) {
  if (gt.empty()) throw Error("word accuracy over an empty ground-truth set");
  std::size_t correct = 0;
  for (const auto &[id, label] : gt) {
    const std::string *pred = manifest.find(id);
    if (!pred) {
      throw Error("model '" + manifest.model_id + "' has no prediction for '" + id + "'");
    }
    if (normalize(*pred, mode) == normalize(label, mode)) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(gt.size());
}

double incomplete_margin(double acc_full, double acc_cropped) {
  if (acc_full < 0 || acc_full > 100 || acc_cropped < 0 || acc_cropped > 100) {
    throw Error("accuracies must lie in [0, 100]");
  }
  return acc_full - acc_cropped;
}

SaturationScope saturation_scope(std::int64_t total, std::int64_t errors,
                                 std::int64_t mislabeled, std::int64_t unrecognizable) {
  if (total <= 0 || errors < 0 || mislabeled < 0 || unrecognizable < 0 ||
      mislabeled + unrecognizable > errors || errors > total) {
    throw UsageError("scope needs mislabeled + unrecognizable <= errors <= total, total > 0");
  }
  const double error_rate = round1(100.0 * errors / total);
  auto bound = [&](std::int64_t count) {
    ScopeBound b;
    b.count = count;
    b.percent = 100.0 * count / total;
    b.headline_percent = errors == 0 ? 0.0 : error_rate * count / errors;
    return b;
  };
  const std::int64_t max_count = errors - mislabeled;
  return {bound(max_count), bound(max_count - unrecognizable)};
}

double round1(double v) { return std::floor(v * 10.0 + 0.5 + 1e-9) / 10.0; }

MetricReport aggregate_report(std::vector<std::pair<std::string, double>> per_subset) {
  if (per_subset.empty()) throw Error("cannot aggregate an empty report");
  double sum = 0.0;
  for (const auto &[name, acc] : per_subset) {
    if (acc < 0 || acc > 100) throw Error("accuracy for '" + name + "' outside [0, 100]");
    sum += acc;
  }
  MetricReport r;
  r.average = sum / static_cast<double>(per_subset.size());
  r.per_subset = std::move(per_subset);
  return r;
}

Json to_json(const MetricReport &r) {
  Json j;
  Json subsets = Json::object();
  for (const auto &[name, acc] : r.per_subset) subsets[name] = acc;
  j["per_subset"] = std::move(subsets);
  j["average"] = r.average;
  j["average_display"] = round1(r.average);
  if (r.incomplete_margin) j["incomplete_margin"] = *r.incomplete_margin;
  return j;
}

std::string render_table(std::span<const std::pair<std::string, MetricReport>> rows) {
  std::vector<std::string> header{"Method"};
  std::vector<std::string> subset_names;
  bool any_margin = false;
  for (const auto &[model, report] : rows) {
    for (const auto &[name, acc] : report.per_subset) {
      if (std::find(subset_names.begin(), subset_names.end(), name) == subset_names.end()) {
        subset_names.push_back(name);
      }
    }
    any_margin = any_margin || report.incomplete_margin.has_value();
  }
  header.insert(header.end(), subset_names.begin(), subset_names.end());
  header.emplace_back("Avg");
  if (any_margin) header.emplace_back("Incomplete");

  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", round1(v));
    return std::string(buf);
  };
  std::vector<std::vector<std::string>> table{header};
  for (const auto &[model, report] : rows) {
    std::vector<std::string> row{model};
    for (const std::string &name : subset_names) {
      auto it = std::find_if(report.per_subset.begin(), report.per_subset.end(),
                             [&](const auto &p) { return p.first == name; });
      row.push_back(it == report.per_subset.end() ? "-" : fmt(it->second));
    }
    row.push_back(fmt(report.average));
    if (any_margin) row.push_back(report.incomplete_margin ? fmt(*report.incomplete_margin) : "-");
    table.push_back(std::move(row));
  }

  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto &row : table)
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());

  std::ostringstream out;
  for (const auto &row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        out << row[c] << std::string(widths[c] - row[c].size(), ' ');
      } else {
        out << "  " << std::string(widths[c] - row[c].size(), ' ') << row[c];
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace strkit::metrics
