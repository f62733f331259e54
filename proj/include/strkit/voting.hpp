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

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "strkit/geometry.hpp"
#include "strkit/manifest.hpp"

namespace strkit::voting {

struct ConsensusConfig {
  /// Pairwise IoU must be strictly greater than this.
  double iou_threshold = 0.7;
  /// Only groups with one region from every detector are eligible.
  bool require_all_detectors = true;

  /// Throws UsageError unless 0 < iou_threshold <= 1.
  void validate() const;
};

struct GroupMember {
  std::size_t detector_index = 0;
  std::string detector_id;
  std::size_t region_index = 0;
  geometry::Polygon polygon;
};

/// Regions from distinct detectors believed to cover the same text.
struct CandidateGroup {
  std::string image_ref;
  std::size_t detector_count = 0;
  std::vector<GroupMember> members;  // sorted by detector_index
};

struct ConsensusRegion {
  std::string image_ref;
  geometry::AABB box;
  /// IoU for each member pair (i < j) in member order.
  std::vector<double> member_ious;
  std::vector<std::string> detector_ids;
  std::vector<geometry::Polygon> members;
};

struct Rejection {
  std::string reason;
};

using FilterResult = std::variant<ConsensusRegion, Rejection>;

/// Greedy agglomeration over cross-detector pairs in descending IoU order.
/// Two clusters merge only when they share no detector, so a group holds at
/// most one region per detector and each region joins at most one group.
/// Throws Error when fewer than two sets are given, image_refs differ, or a
/// detector appears twice.
std::vector<CandidateGroup> match_detections(std::span<const DetectionSet> sets,
                                             const ConsensusConfig &cfg = {});

FilterResult consensus_filter(const CandidateGroup &group, const ConsensusConfig &cfg);

/// match_detections followed by consensus_filter, keeping accepted regions.
std::vector<ConsensusRegion> harvest(std::span<const DetectionSet> sets,
                                     const ConsensusConfig &cfg);

/// Pseudo-labeled instances: empty label, not ignored, provenance.pseudo set.
/// Ids are `<image_ref>#<n>` with n counting from `first_index`.
std::vector<TextInstance> to_instances(std::span<const ConsensusRegion> regions,
                                       const std::string &source_dataset,
                                       std::size_t first_index = 0);

}  // namespace strkit::voting
