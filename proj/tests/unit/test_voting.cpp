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

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "strkit/error.hpp"
#include "strkit/voting.hpp"

using namespace strkit;
using namespace strkit::voting;
using th::rect;

namespace {

DetectionSet set(const std::string &det, std::vector<geometry::Polygon> regions,
                 const std::string &image = "a.png") {
  return DetectionSet{det, image, std::move(regions)};
}

CandidateGroup group_of(const std::vector<geometry::Polygon> &polys) {
  CandidateGroup g;
  g.image_ref = "a.png";
  g.detector_count = polys.size();
  for (std::size_t i = 0; i < polys.size(); ++i) {
    g.members.push_back({i, "d" + std::to_string(i), 0, polys[i]});
  }
  return g;
}

}  // namespace

TEST_SUITE("voting") {
  TEST_CASE("three identical boxes form one group") {
    const auto box = rect(0, 0, 10, 4);
    std::vector<DetectionSet> sets{set("a", {box}), set("b", {box}), set("c", {box})};
    const auto groups = match_detections(sets);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].members.size() == 3);
    CHECK(groups[0].detector_count == 3);
  }

  TEST_CASE("an empty detector blocks unanimity") {
    const auto box = rect(0, 0, 10, 4);
    std::vector<DetectionSet> sets{set("a", {box}), set("b", {box}), set("c", {})};
    CHECK(match_detections(sets).empty());
    ConsensusConfig partial;
    partial.require_all_detectors = false;
    const auto groups = match_detections(sets, partial);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].members.size() == 2);
    CHECK(harvest(sets, partial).size() == 1);
  }

  TEST_CASE("precondition errors") {
    const auto box = rect(0, 0, 10, 4);
    std::vector<DetectionSet> one{set("a", {box})};
    CHECK_THROWS_AS(match_detections(one), Error);
    std::vector<DetectionSet> mixed{set("a", {box}), set("b", {box}, "other.png")};
    CHECK_THROWS_AS(match_detections(mixed), Error);
    std::vector<DetectionSet> twice{set("a", {box}), set("a", {box})};
    CHECK_THROWS_AS(match_detections(twice), Error);
    ConsensusConfig bad;
    bad.iou_threshold = 0.0;
    CHECK_THROWS(bad.validate());
  }

  TEST_CASE("two text lines match the exhaustive best assignment") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> j(-1.5, 1.5);
    for (int trial = 0; trial < 100; ++trial) {
      const geometry::Polygon lines[2] = {rect(10, 10, 90, 30), rect(12, 50, 80, 72)};
      std::vector<DetectionSet> sets;
      for (int d = 0; d < 3; ++d) {
        std::vector<int> order{0, 1};
        if (rng() % 2) std::swap(order[0], order[1]);
        std::vector<geometry::Polygon> regions;
        for (int line : order) {
          const auto &b = lines[line].vertices;
          regions.push_back(rect(b[0].x + j(rng), b[0].y + j(rng), b[2].x + j(rng), b[2].y + j(rng)));
        }
        sets.push_back(set("d" + std::to_string(d), regions));
      }
      // brute force: region of detector 0 at index i pairs with perm_b[i], perm_c[i]
      double best = -1;
      std::set<std::vector<std::size_t>> best_groups;
      for (int pb = 0; pb < 2; ++pb) {
        for (int pc = 0; pc < 2; ++pc) {
          double score = 0;
          std::set<std::vector<std::size_t>> groups;
          for (std::size_t i = 0; i < 2; ++i) {
            const std::size_t bi = pb ? 1 - i : i, ci = pc ? 1 - i : i;
            const auto &ra = sets[0].regions[i], &rb = sets[1].regions[bi], &rc = sets[2].regions[ci];
            score += geometry::polygon_iou(ra, rb) + geometry::polygon_iou(ra, rc) +
                     geometry::polygon_iou(rb, rc);
            groups.insert({i, bi, ci});
          }
          if (score > best) {
            best = score;
            best_groups = groups;
          }
        }
      }
      std::set<std::vector<std::size_t>> got;
      for (const auto &g : match_detections(sets)) {
        REQUIRE(g.members.size() == 3);
        got.insert({g.members[0].region_index, g.members[1].region_index, g.members[2].region_index});
      }
      CHECK(got == best_groups);
    }
  }

  TEST_CASE("consensus_filter examples") {
    const auto sq = rect(0, 0, 1, 1);
    const FilterResult ok = consensus_filter(group_of({sq, sq, sq}), {});
    REQUIRE(std::holds_alternative<ConsensusRegion>(ok));
    CHECK(std::get<ConsensusRegion>(ok).box == geometry::AABB{0, 0, 1, 1});
    CHECK(std::get<ConsensusRegion>(ok).member_ious.size() == 3);

    // shift 10/3 on a 10-wide box gives IoU (10 - d) / (10 + d) = 0.5
    const auto a = rect(0, 0, 10, 1), b = rect(10.0 / 3, 0, 10 + 10.0 / 3, 1);
    REQUIRE(geometry::polygon_iou(a, b) == doctest::Approx(0.5));
    CHECK(std::holds_alternative<Rejection>(consensus_filter(group_of({a, b}), {})));
  }

  TEST_CASE("one weak pair rejects the whole group") {
    // unit shifts either way: IoUs 9/11, 9/11 and 8/12
    const auto a = rect(0, 0, 10, 10), b = rect(1, 0, 11, 10), c = rect(-1, 0, 9, 10);
    const double ab = geometry::polygon_iou(a, b), ac = geometry::polygon_iou(a, c),
                 bc = geometry::polygon_iou(b, c);
    CHECK(ab == doctest::Approx(9.0 / 11));
    CHECK(ac == doctest::Approx(9.0 / 11));
    CHECK(bc == doctest::Approx(8.0 / 12));
    const bool rule = ab > 0.7 && ac > 0.7 && bc > 0.7;
    CHECK_FALSE(rule);
    CHECK(std::holds_alternative<Rejection>(consensus_filter(group_of({a, b, c}), {})));
    ConsensusConfig loose;
    loose.iou_threshold = 0.6;
    CHECK(std::holds_alternative<ConsensusRegion>(consensus_filter(group_of({a, b, c}), loose)));
  }

  TEST_CASE("threshold is strict") {
    // IoU exactly 0.5 is not above 0.5
    const auto a = rect(0, 0, 10, 1), b = rect(10.0 / 3, 0, 10 + 10.0 / 3, 1);
    ConsensusConfig half;
    half.iou_threshold = geometry::polygon_iou(a, b);
    CHECK(std::holds_alternative<Rejection>(consensus_filter(group_of({a, b}), half)));
  }

  TEST_CASE("random triples: rule, containment and monotonicity") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> j(-3, 3);
    const double thresholds[] = {0.3, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::size_t accepted_prev = SIZE_MAX;
    std::vector<CandidateGroup> groups;
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<geometry::Polygon> polys;
      for (int k = 0; k < 3; ++k) {
        polys.push_back(geometry::Polygon{
            {{j(rng), j(rng)}, {30 + j(rng), j(rng)}, {30 + j(rng), 10 + j(rng)}, {j(rng), 10 + j(rng)}}});
      }
      groups.push_back(group_of(polys));
    }
    for (double t : thresholds) {
      ConsensusConfig cfg;
      cfg.iou_threshold = t;
      std::size_t accepted = 0;
      for (const auto &g : groups) {
        const auto &p = g.members;
        const double i01 = geometry::polygon_iou(p[0].polygon, p[1].polygon);
        const double i02 = geometry::polygon_iou(p[0].polygon, p[2].polygon);
        const double i12 = geometry::polygon_iou(p[1].polygon, p[2].polygon);
        const bool rule = i01 > t && i02 > t && i12 > t;
        const FilterResult r = consensus_filter(g, cfg);
        REQUIRE(std::holds_alternative<ConsensusRegion>(r) == rule);
        if (rule) {
          ++accepted;
          const auto &region = std::get<ConsensusRegion>(r);
          for (const auto &m : p)
            for (auto v : m.polygon.vertices) CHECK(region.box.contains(v));
          CHECK(*std::min_element(region.member_ious.begin(), region.member_ious.end()) > t);
        }
      }
      CHECK(accepted <= accepted_prev);
      accepted_prev = accepted;
    }
  }

  TEST_CASE("pseudo instances") {
    const auto box = rect(2, 2, 12, 6);
    std::vector<DetectionSet> sets{set("a", {box}), set("b", {box}), set("c", {box})};
    const auto regions = harvest(sets, {});
    const auto inst = to_instances(regions, "pseudo");
    REQUIRE(inst.size() == 1);
    CHECK(inst[0].id == "a.png#0");
    CHECK(inst[0].label.empty());
    CHECK_FALSE(inst[0].ignored);
    REQUIRE(inst[0].provenance.has_value());
    CHECK(inst[0].provenance->pseudo);
    CHECK(inst[0].provenance->detectors == std::vector<std::string>{"a", "b", "c"});
    CHECK(validate(inst[0]).empty());
    CHECK(harvest(sets, {}).size() == regions.size());
  }
}
