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

#include "longtail/behaviors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "longtail/agents.hpp"

namespace longtail
{

namespace
{

// Objects closer than this along the lane join one blocking cluster.
constexpr double kClusterGap = 10.0;
constexpr double kStoppedAgentSpeed = 0.5;

bool side_is_drivable(const LaneGraph & graph, const LaneSegment & lane, const BlockingInfo & b,
                      double offset)
{
  const double from = std::max(0.0, b.near_s - 3.0);
  const double to = std::min(lane.centerline.length(), b.far_s + 3.0);
  for (double s = from; s <= to + 1e-9; s += 1.5) {
    const Pose2D p = frenet_to_cartesian({std::min(s, lane.centerline.length()), offset},
                                         lane.centerline);
    const OrientedBox box(p, kCarLength, kCarWidth);
    for (const auto & c : box.corners()) {
      if (!point_in_any(c, graph.drivable_area())) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

std::string_view to_string(BehaviorLabel label)
{
  switch (label) {
    case BehaviorLabel::FollowLane:
      return "follow_lane";
    case BehaviorLabel::MergeLeft:
      return "merge_left";
    case BehaviorLabel::MergeRight:
      return "merge_right";
    case BehaviorLabel::OvertakeObstacle:
      return "overtake_obstacle";
    case BehaviorLabel::StopAndWait:
      return "stop_and_wait";
  }
  return "follow_lane";
}

std::string_view to_phrase(BehaviorLabel label)
{
  switch (label) {
    case BehaviorLabel::FollowLane:
      return "follow lane";
    case BehaviorLabel::MergeLeft:
      return "merge left";
    case BehaviorLabel::MergeRight:
      return "merge right";
    case BehaviorLabel::OvertakeObstacle:
      return "overtake obstacle";
    case BehaviorLabel::StopAndWait:
      return "stop and wait";
  }
  return "follow lane";
}

BehaviorLabel behavior_label_from_string(std::string_view name)
{
  for (auto l : kAllBehaviorLabels) {
    if (to_string(l) == name || to_phrase(l) == name) {
      return l;
    }
  }
  throw std::invalid_argument("unknown behavior '" + std::string(name) + "'");
}

std::optional<BlockingInfo> find_blocking(const Observation & obs, const LaneId & lane_id)
{
  const LaneSegment & lane = obs.graph->lane(lane_id);
  const double ego_s = project_to_centerline(obs.ego.box.center.position(), lane.centerline).s;
  const double front = ego_s + 0.5 * kCarLength;
  const double rear = ego_s - 0.5 * kCarLength;
  const double half = 0.5 * kCarWidth + kOvertakeClearance;

  struct Hit
  {
    LaneFootprint fp;
    ObstacleKind kind;
    bool vehicle;
  };
  std::vector<Hit> hits;
  auto consider = [&](const OrientedBox & box, ObstacleKind kind, bool vehicle) {
    const LaneFootprint fp = footprint_on(box, lane.centerline);
    if (fp.d_max < -half || fp.d_min > half) {
      return;
    }
    if (fp.s_max <= rear || fp.s_min - front > kBlockingLookahead) {
      return;
    }
    hits.push_back({fp, kind, vehicle});
  };
  for (const auto & o : obs.obstacles) {
    if (o.blocks_progress()) {
      consider(o.box, o.kind, false);
    }
  }
  for (const auto & a : obs.agents) {
    if (a.speed < kStoppedAgentSpeed) {
      consider(a.box, ObstacleKind::ParkedVehicle, true);
    }
  }
  if (hits.empty()) {
    return std::nullopt;
  }
  std::sort(hits.begin(), hits.end(), [](const Hit & a, const Hit & b) {
    return a.fp.s_min < b.fp.s_min;
  });
  BlockingInfo info;
  info.kind = hits.front().kind;
  info.is_vehicle = hits.front().vehicle;
  info.near_s = hits.front().fp.s_min;
  info.distance = std::max(0.0, info.near_s - front);
  info.far_s = hits.front().fp.s_max;
  info.d_min = hits.front().fp.d_min;
  info.d_max = hits.front().fp.d_max;
  for (std::size_t i = 1; i < hits.size(); ++i) {
    if (hits[i].fp.s_min > info.far_s + kClusterGap) {
      break;
    }
    info.far_s = std::max(info.far_s, hits[i].fp.s_max);
    info.d_min = std::min(info.d_min, hits[i].fp.d_min);
    info.d_max = std::max(info.d_max, hits[i].fp.d_max);
  }
  return info;
}

BehaviorOption follow_lane_option(const Observation & obs)
{
  const LanePosition lp = ego_reference_lane(*obs.graph, obs.route, obs.ego.box.center);
  const auto & lane = obs.graph->lane(lp.lane);
  return {BehaviorLabel::FollowLane, lane.id, 0.0, lane.speed_limit, std::nullopt};
}

std::vector<BehaviorOption> enumerate_behaviors(const Observation & obs)
{
  const LaneGraph & graph = *obs.graph;
  const LanePosition lp = ego_reference_lane(graph, obs.route, obs.ego.box.center);
  const LaneSegment & lane = graph.lane(lp.lane);
  std::vector<BehaviorOption> out;
  out.push_back({BehaviorLabel::FollowLane, lane.id, 0.0, lane.speed_limit, std::nullopt});
  if (lane.left_neighbor && graph.contains(*lane.left_neighbor)) {
    const auto & n = graph.lane(*lane.left_neighbor);
    out.push_back({BehaviorLabel::MergeLeft, n.id, 0.0, n.speed_limit, std::nullopt});
  }
  if (lane.right_neighbor && graph.contains(*lane.right_neighbor)) {
    const auto & n = graph.lane(*lane.right_neighbor);
    out.push_back({BehaviorLabel::MergeRight, n.id, 0.0, n.speed_limit, std::nullopt});
  }
  if (const auto blocking = find_blocking(obs, lane.id)) {
    const double half = 0.5 * kCarWidth + kOvertakeClearance;
    const double left = blocking->d_max + half;
    const double right = blocking->d_min - half;
    std::optional<double> offset;
    const bool left_ok = side_is_drivable(graph, lane, *blocking, left);
    const bool right_ok = side_is_drivable(graph, lane, *blocking, right);
    if (left_ok && (!right_ok || std::abs(left) <= std::abs(right))) {
      offset = left;
    } else if (right_ok) {
      offset = right;
    }
    if (offset) {
      out.push_back(
        {BehaviorLabel::OvertakeObstacle, lane.id, *offset, lane.speed_limit, blocking});
    }
  }
  out.push_back({BehaviorLabel::StopAndWait, lane.id, 0.0, 0.0, std::nullopt});
  return out;
}

const BehaviorOption * find_option(const std::vector<BehaviorOption> & options, BehaviorLabel label)
{
  for (const auto & o : options) {
    if (o.label == label) {
      return &o;
    }
  }
  return nullptr;
}

}  // namespace longtail
