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

// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <unistd.h>

#include "oracles.hpp"
#include "pipeline.hpp"
#include "strkit/benchmark.hpp"
#include "strkit/difficulty.hpp"
#include "strkit/geometry.hpp"
#include "strkit/manifest.hpp"
#include "strkit/metrics.hpp"
#include "strkit/text.hpp"
#include "strkit/voting.hpp"

namespace fs = std::filesystem;
using namespace strkit;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream why;

  void expect(bool cond, const std::string &msg) {
    if (!cond && ok) why << msg;
    ok = ok && cond;
  }
};

int failures = 0;

void criterion(const std::string &name, const std::function<void(Check &)> &body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception &e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s  %-28s (%.2fs)%s%s\n", c.ok ? "PASS" : "FAIL", name.c_str(), secs,
              c.ok ? "" : "  ", c.why.str().c_str());
  std::fflush(stdout);
  failures += !c.ok;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fold(const std::string &s, bool strip) {
  std::string out;
  for (unsigned char c : s) {
    if (strip && !std::isalnum(c)) continue;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

void saturation(Check &c) {
  const auto s = metrics::saturation_scope(7672, 298, 76, 105);
  c.expect(s.max_scope.count == 222, "max count");
  c.expect(s.min_scope.count == 117, "min count");
  c.expect(std::abs(s.max_scope.headline_percent - 2.91) <= 0.005, "max percent");
  c.expect(std::abs(s.min_scope.headline_percent - 1.53) <= 0.005, "min percent");
  const auto r = synth::cli({"scope", "--total", "7672", "--errors", "298", "--mislabeled", "76",
                             "--unrecognizable", "105"});
  c.expect(r.code == 0 && r.out.find("max 222 (2.91%), min 117 (1.53%)") != std::string::npos,
           "cli output");
}

void binning(Check &c) {
  const Difficulty want[14] = {
      Difficulty::kChallenging, Difficulty::kHard,   Difficulty::kHard,   Difficulty::kHard,
      Difficulty::kHard,        Difficulty::kMedium, Difficulty::kMedium, Difficulty::kMedium,
      Difficulty::kNormal,      Difficulty::kNormal, Difficulty::kNormal, Difficulty::kEasy,
      Difficulty::kEasy,        Difficulty::kEasy};
  for (int s = 0; s <= 13; ++s) {
    c.expect(difficulty::assign_level(s, 13) == want[s], "sum " + std::to_string(s));
  }
  const int scaled[4] = {0, (4 * 13 + 12) / 13, (7 * 13 + 12) / 13, (10 * 13 + 12) / 13};
  const auto bounds = difficulty::level_bounds(13);
  for (int k = 0; k < 4; ++k) c.expect(bounds[k] == scaled[k], "bound " + std::to_string(k));
  c.expect(bounds == std::array<int, 4>{0, 4, 7, 10}, "bins at N=13");
}

void table_average(Check &c) {
  const auto r = metrics::aggregate_report(
      {{"IIIT5K", 89.7}, {"SVT", 88.3}, {"IC13", 82.2}, {"IC15", 69.3}, {"SVTP", 67.8}, {"CUTE80", 71.2}});
  c.expect(std::abs(metrics::round1(r.average) - 78.1) <= 0.05, "average " + std::to_string(r.average));
}

void metric_order(Check &c) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  const std::string alphabet = "aAbB01 -!.";
  for (int trial = 0; trial < 1000; ++trial) {
    PredictionManifest m{"m", {}};
    std::map<std::string, std::string> gt;
    const int n = 1 + rng() % 30;
    std::size_t ok_wa = 0, ok_ic = 0, ok_ics = 0;
    for (int i = 0; i < n; ++i) {
      std::string label, pred;
      for (int k = 0; k < 1 + int(rng() % 5); ++k) label.push_back(alphabet[rng() % alphabet.size()]);
      pred = label;
      if (rng() % 2) pred[rng() % pred.size()] = alphabet[rng() % alphabet.size()];
      if (rng() % 3 == 0) pred += ".";
      const std::string id = "s" + std::to_string(i);
      gt[id] = label;
      m.predictions[id] = pred;
      ok_wa += pred == label;
      ok_ic += fold(pred, false) == fold(label, false);
      ok_ics += fold(pred, true) == fold(label, true);
    }
    const double wa = metrics::word_accuracy(m, gt, metrics::NormalizationMode::kWA);
    const double waic = metrics::word_accuracy(m, gt, metrics::NormalizationMode::kWAIC);
    const double waics = metrics::word_accuracy(m, gt, metrics::NormalizationMode::kWAICS);
    c.expect(wa <= waic && waic <= waics, "ordering at trial " + std::to_string(trial));
    c.expect(std::abs(wa - 100.0 * ok_wa / n) < 1e-9 && std::abs(waic - 100.0 * ok_ic / n) < 1e-9 &&
                 std::abs(waics - 100.0 * ok_ics / n) < 1e-9,
             "oracle mismatch at trial " + std::to_string(trial));
  }
  c.expect(seconds_since(t0) < 5.0, "slower than 5 s");
}

void geometry_oracles(Check &c) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> off(-20, 20);
  double worst_iou = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = oracle::random_convex(rng, 4, 50, 50, 8, 30);
    const auto b = oracle::random_convex(rng, 4, 50 + off(rng), 50 + off(rng), 8, 30);
    worst_iou = std::max(worst_iou, std::abs(geometry::polygon_iou(a, b) - oracle::raster_iou(a, b, 2000)));
  }
  c.expect(worst_iou <= 1e-3, "iou error " + std::to_string(worst_iou));
  double worst_rect = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = oracle::random_convex(rng, 3 + trial % 10, 0, 0, 5, 50);
    worst_rect = std::max(worst_rect,
                          std::abs(geometry::min_rotated_rect(p).area() - oracle::sweep_min_rect_area(p)));
  }
  c.expect(worst_rect <= 1e-6, "rect area error " + std::to_string(worst_rect));
  c.expect(seconds_since(t0) < 60.0, "slower than 60 s");
}

void consensus(Check &c) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> j(-4, 4);
  std::vector<voting::CandidateGroup> groups;
  for (int trial = 0; trial < 1000; ++trial) {
    voting::CandidateGroup g;
    g.image_ref = "x.png";
    g.detector_count = 3;
    for (std::size_t d = 0; d < 3; ++d) {
      geometry::Polygon p{{{j(rng), j(rng)}, {40 + j(rng), j(rng)}, {40 + j(rng), 12 + j(rng)},
                           {j(rng), 12 + j(rng)}}};
      g.members.push_back({d, "det" + std::to_string(d), 0, p});
    }
    groups.push_back(g);
  }
  std::size_t prev = SIZE_MAX;
  for (double t : {0.5, 0.6, 0.7, 0.8, 0.9}) {
    voting::ConsensusConfig cfg;
    cfg.iou_threshold = t;
    std::size_t accepted = 0;
    for (const auto &g : groups) {
      const auto &m = g.members;
      const bool rule = geometry::polygon_iou(m[0].polygon, m[1].polygon) > t &&
                        geometry::polygon_iou(m[0].polygon, m[2].polygon) > t &&
                        geometry::polygon_iou(m[1].polygon, m[2].polygon) > t;
      const auto r = voting::consensus_filter(g, cfg);
      const bool got = std::holds_alternative<voting::ConsensusRegion>(r);
      c.expect(got == rule, "rule mismatch at threshold " + std::to_string(t));
      if (got) {
        ++accepted;
        const auto &box = std::get<voting::ConsensusRegion>(r).box;
        for (const auto &mem : m)
          for (auto v : mem.polygon.vertices) c.expect(box.contains(v), "box misses a vertex");
      }
    }
    c.expect(accepted <= prev, "acceptance not monotone");
    if (t == 0.7) c.expect(accepted > 0 && accepted < groups.size(), "degenerate fixture");
    prev = accepted;
  }
}

void sampling(Check &c) {
  std::vector<TextInstance> corpus;
  const std::size_t sizes[5] = {3, 100, 100, 100, 100};
  for (std::size_t k = 0; k < 5; ++k) {
    for (std::size_t i = 0; i < sizes[k]; ++i) {
      TextInstance t;
      t.id = "L" + std::to_string(k) + "_" + std::to_string(i);
      t.source_dataset = "ds";
      t.image_ref = "i.png";
      t.polygon = geometry::Polygon{{{0, 0}, {10, 0}, {10, 5}, {0, 5}}};
      t.label = "word";
      t.difficulty = kAllDifficulties[k];
      corpus.push_back(t);
    }
  }
  std::vector<TextInstance> even = corpus;
  for (std::size_t i = 3; i < 10; ++i) {
    even.push_back(corpus[0]);
    even.back().id = "L0_" + std::to_string(i);
  }
  const auto e = benchmark::stratified_sample(even, 50, 1);
  c.expect(e.per_level.size() == 5, "missing level");
  for (auto [d, n] : e.per_level) c.expect(n == 10, "even split");
  const auto s = benchmark::stratified_sample(corpus, 50, 1);
  c.expect(s.ids.size() == 50, "redistributed total");
  c.expect(s.per_level.at(Difficulty::kChallenging) == 3, "short level");
  c.expect(benchmark::stratified_sample(corpus, 50, 1).ids == s.ids, "same seed differs");
  auto shuffled = corpus;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(3));
  c.expect(benchmark::stratified_sample(shuffled, 50, 1).ids == s.ids, "order dependence");
  c.expect(benchmark::stratified_sample(corpus, 50, 2).ids != s.ids, "seed ignored");

  std::size_t left = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string id = "sample/" + std::to_string(i);
    const auto side = benchmark::choose_side(5, id);
    c.expect(side == benchmark::choose_side(5, id), "side not deterministic");
    left += side == imaging::Side::kLeft;
  }
  const double frac = left / 10000.0;
  c.expect(frac >= 0.48 && frac <= 0.52, "left fraction " + std::to_string(frac));

  std::vector<benchmark::MutationInput> in;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    TextInstance t = corpus[3 + i % 397];
    t.id = "m" + std::to_string(i);
    t.label = std::string(2 + i % 9, static_cast<char>('a' + i % 26));
    t.difficulty = Difficulty::kEasy;
    in.push_back({t, imaging::RasterImage(12 * static_cast<int>(t.label.size()), 16, 1, 128)});
  }
  const auto m1 = benchmark::mutate_incomplete(in, 17, 1);
  const auto m4 = benchmark::mutate_incomplete(in, 17, 4);
  c.expect(m1.mutated.size() == in.size(), "mutation skipped inputs");
  for (std::size_t i = 0; i < m1.mutated.size(); ++i) {
    c.expect(text::length(m1.mutated[i].instance.label) + 1 == text::length(in[i].instance.label),
             "label not shortened by one");
    c.expect(m1.mutated[i].side == m4.mutated[i].side && m1.mutated[i].image == m4.mutated[i].image,
             "worker dependence");
  }
}

/// Every JSONL output parses under its record schema.
void check_schemas(Check &c, const fs::path &out) {
  for (const char *f : {"ingested.jsonl", "cropped.jsonl", "filtered.jsonl", "deduped.jsonl",
                        "pseudo.jsonl", "leveled.jsonl", "bench/train.jsonl", "mutated/incomplete.jsonl"}) {
    const auto r = read_corpus(out / f);
    c.expect(r.issues.empty(), std::string(f) + " has issues");
    for (const auto &inst : r.records) {
      const auto v = validate(inst);
      c.expect(v.empty(), std::string(f) + ": " + inst.id + " invalid");
    }
  }
  for (const char *f : {"bench/curve.jsonl", "bench/general.jsonl", "bench/incomplete.jsonl"}) {
    c.expect(!benchmark::read_subset_ids(out / f).empty(), std::string(f) + " empty");
  }
  for (const char *f : {"filtered.drops.jsonl", "deduped.drops.jsonl", "mutated/pairs.jsonl"}) {
    std::ifstream in(out / f);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      const Json j = Json::parse(line);
      c.expect(j.contains("id"), std::string(f) + " line without id");
      ++n;
    }
    c.expect(n > 0, std::string(f) + " empty");
  }
  std::ifstream rep(out / "report.json");
  const Json report = Json::parse(rep);
  c.expect(report["models"].size() == 13, "report model count");
  for (const auto &m : report["models"]) {
    c.expect(m["report"].contains("incomplete_margin"), "report without margin");
    c.expect(m["report"]["per_subset"].contains("curve"), "report without curve");
  }
}

void end_to_end(Check &c) {
  const fs::path root = fs::temp_directory_path() / ("strkit_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const auto t0 = std::chrono::steady_clock::now();
  const synth::Fixture fx = synth::make_fixture(root / "fixture");
  c.expect(fx.detections.size() == 3 && fx.predictions.size() == 13, "fixture shape");
  const synth::PipelineRun run = synth::run_pipeline(fx, root / "out", 1);
  const double secs = seconds_since(t0);
  c.expect(run.ok(), run.failure());
  if (run.ok()) {
    check_schemas(c, root / "out");
    const auto curve = benchmark::read_subset_ids(root / "out/bench/curve.jsonl");
    c.expect(curve == fx.accepted_ids, "curve subset differs from the accepted ids");
    const auto filtered = read_corpus(root / "out/filtered.jsonl").records;
    c.expect(filtered.size() == fx.instance_count - fx.ignored_count - fx.non_latin_count,
             "filter count");
    const auto deduped = read_corpus(root / "out/deduped.jsonl").records;
    c.expect(deduped.size() + fx.duplicate_count == filtered.size(), "dedup count");
  }
  c.expect(secs < 60.0, "pipeline took " + std::to_string(secs) + " s");

  // the same pipeline with four workers produces the same bytes
  if (run.ok()) {
    const auto one = synth::snapshot(root / "out");
    fs::remove_all(root / "out");
    const synth::PipelineRun again = synth::run_pipeline(fx, root / "out", 4);
    c.expect(again.ok(), again.failure());
    c.expect(synth::snapshot(root / "out") == one, "outputs differ with four workers");
  }
  fs::remove_all(root);
}

}  // namespace

int main() {
  criterion("saturation-arithmetic", saturation);
  criterion("difficulty-binning", binning);
  criterion("table-average", table_average);
  criterion("metric-ordering", metric_order);
  criterion("geometry-oracles", geometry_oracles);
  criterion("consensus-voting", consensus);
  criterion("stratified-sampling", sampling);
  criterion("end-to-end-pipeline", end_to_end);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
