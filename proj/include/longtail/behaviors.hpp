// Copyright 2026 The longtail Authors
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

#ifndef LONGTAIL__BEHAVIORS_HPP_
#define LONGTAIL__BEHAVIORS_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "longtail/planning.hpp"

namespace longtail
{

enum class BehaviorLabel { FollowLane, MergeLeft, MergeRight, OvertakeObstacle, StopAndWait };

inline constexpr std::array<BehaviorLabel, 5> kAllBehaviorLabels{
  BehaviorLabel::FollowLane, BehaviorLabel::MergeLeft, BehaviorLabel::MergeRight,
  BehaviorLabel::OvertakeObstacle, BehaviorLabel::StopAndWait};

/// Identifier form, e.g. "merge_left".
std::string_view to_string(BehaviorLabel label);
/// Prose form used in prompts, e.g. "merge left".
std::string_view to_phrase(BehaviorLabel label);
BehaviorLabel behavior_label_from_string(std::string_view name);

/// Clearance kept to a blocking obstacle when computing the overtake offset.
inline constexpr double kOvertakeClearance = 0.3;
/// How far ahead a blocking object triggers the overtake option.
inline constexpr double kBlockingLookahead = 60.0;

struct BlockingInfo
{
  ObstacleKind kind{ObstacleKind::Cone};
  bool is_vehicle{false};  // stopped agent rather than a static obstacle
  double distance{0.0};    // ego front to the nearest blocking object, m
  double near_s{0.0};
  double far_s{0.0};  // far end of the blocking cluster on the lane
  double d_min{0.0};
  double d_max{0.0};
};

struct BehaviorOption
{
  BehaviorLabel label{BehaviorLabel::FollowLane};
  LaneId centerline;
  double lateral_offset{0.0};
  double target_speed_cap{0.0};
  std::optional<BlockingInfo> blocking;  // set for overtake_obstacle

  bool operator==(const BehaviorOption & o) const
  {
    return label == o.label && centerline == o.centerline && lateral_offset == o.lateral_offset &&
           target_speed_cap == o.target_speed_cap;
  }
};

/// Blocking cluster ahead on `lane` within the lookahead, if any.
std::optional<BlockingInfo> find_blocking(const Observation & obs, const LaneId & lane);

/// Options filtered by neighbor availability and blocking objects; always
/// contains follow_lane and stop_and_wait.
std::vector<BehaviorOption> enumerate_behaviors(const Observation & obs);

/// Default option: follow the ego's reference lane at offset 0.
BehaviorOption follow_lane_option(const Observation & obs);

const BehaviorOption * find_option(const std::vector<BehaviorOption> & options, BehaviorLabel label);

}  // namespace longtail

#endif  // LONGTAIL__BEHAVIORS_HPP_
