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

#include "strkit/voting.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "strkit/error.hpp"

namespace strkit::voting {

void ConsensusConfig::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw UsageError("iou_threshold must lie in (0, 1]");
  }
}

std::vector<CandidateGroup> match_detections(std::span<const DetectionSet> sets,
                                             const ConsensusConfig &cfg) {
  if (sets.size() < 2) throw Error("consensus matching needs at least 2 detectors");
  std::set<std::string> ids;
  for (const DetectionSet &s : sets) {
    if (s.image_ref != sets.front().image_ref) {
      throw Error("detection sets disagree on image_ref: '" + s.image_ref + "' vs '" +
                  sets.front().image_ref + "'");
    }
    if (!ids.insert(s.detector_id).second) {
      throw Error("detector '" + s.detector_id + "' appears twice");
    }
  }

  struct Node {
    std::size_t det;
    std::size_t reg;
  };
  std::vector<Node> nodes;
  for (std::size_t d = 0; d < sets.size(); ++d)
    for (std::size_t r = 0; r < sets[d].regions.size(); ++r) nodes.push_back({d, r});

  struct Pair {
    double iou;
    std::size_t a;
    std::size_t b;
  };
  std::vector<Pair> pairs;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      if (nodes[a].det == nodes[b].det) continue;
      const double iou = geometry::polygon_iou(sets[nodes[a].det].regions[nodes[a].reg],
                                               sets[nodes[b].det].regions[nodes[b].reg]);
      if (iou > 0.0) pairs.push_back({iou, a, b});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair &x, const Pair &y) { return x.iou > y.iou; });

  // Union-find where each root tracks the detectors it already holds.
  std::vector<std::size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::vector<bool>> dets(nodes.size(), std::vector<bool>(sets.size(), false));
  for (std::size_t i = 0; i < nodes.size(); ++i) dets[i][nodes[i].det] = true;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Pair &p : pairs) {
    std::size_t ra = find(p.a);
    std::size_t rb = find(p.b);
    if (ra == rb) continue;
    bool clash = false;
    for (std::size_t d = 0; d < sets.size() && !clash; ++d) clash = dets[ra][d] && dets[rb][d];
    if (clash) continue;
    if (rb < ra) std::swap(ra, rb);
    parent[rb] = ra;
    for (std::size_t d = 0; d < sets.size(); ++d) dets[ra][d] = dets[ra][d] || dets[rb][d];
  }

  std::vector<std::vector<std::size_t>> clusters(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) clusters[find(i)].push_back(i);

  std::vector<CandidateGroup> groups;
  for (std::size_t root = 0; root < nodes.size(); ++root) {
    const auto &members = clusters[root];
    if (members.size() < 2) continue;
    if (cfg.require_all_detectors && members.size() != sets.size()) continue;
    CandidateGroup g;
    g.image_ref = sets.front().image_ref;
    g.detector_count = sets.size();
    for (std::size_t idx : members) {
      const Node &n = nodes[idx];
      g.members.push_back({n.det, sets[n.det].detector_id, n.reg, sets[n.det].regions[n.reg]});
    }
    std::sort(g.members.begin(), g.members.end(), [](const GroupMember &x, const GroupMember &y) {
      return x.detector_index < y.detector_index;
    });
    groups.push_back(std::move(g));
  }
  return groups;
}

FilterResult consensus_filter(const CandidateGroup &group, const ConsensusConfig &cfg) {
  cfg.validate();
  if (group.members.size() < 2) return Rejection{"fewer than two members"};
  if (cfg.require_all_detectors && group.members.size() < group.detector_count) {
    return Rejection{"missing detectors: " + std::to_string(group.members.size()) + " of " +
                     std::to_string(group.detector_count)};
  }
  ConsensusRegion region;
  region.image_ref = group.image_ref;
  for (std::size_t i = 0; i < group.members.size(); ++i) {
    for (std::size_t j = i + 1; j < group.members.size(); ++j) {
      const double iou =
          geometry::polygon_iou(group.members[i].polygon, group.members[j].polygon);
      if (!(iou > cfg.iou_threshold)) {
        return Rejection{"IoU " + std::to_string(iou) + " between " +
                         group.members[i].detector_id + " and " +
                         group.members[j].detector_id + " is not above threshold"};
      }
      region.member_ious.push_back(iou);
    }
  }
  for (const GroupMember &m : group.members) {
    region.detector_ids.push_back(m.detector_id);
    region.members.push_back(m.polygon);
  }
  region.box = geometry::min_aabb(region.members);
  return region;
}

std::vector<ConsensusRegion> harvest(std::span<const DetectionSet> sets,
                                     const ConsensusConfig &cfg) {
  cfg.validate();
  std::vector<ConsensusRegion> out;
  for (const CandidateGroup &g : match_detections(sets, cfg)) {
    FilterResult r = consensus_filter(g, cfg);
    if (auto *region = std::get_if<ConsensusRegion>(&r)) out.push_back(std::move(*region));
  }
  return out;
}

std::vector<TextInstance> to_instances(std::span<const ConsensusRegion> regions,
                                       const std::string &source_dataset,
                                       std::size_t first_index) {
  std::vector<TextInstance> out;
  out.reserve(regions.size());
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const ConsensusRegion &r = regions[i];
    TextInstance inst;
    inst.id = r.image_ref + "#" + std::to_string(first_index + i);
    inst.source_dataset = source_dataset;
    inst.image_ref = r.image_ref;
    inst.polygon = r.box.to_polygon();
    inst.provenance = Provenance{true, r.detector_ids, r.member_ious};
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace strkit::voting
