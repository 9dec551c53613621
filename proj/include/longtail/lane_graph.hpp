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

#ifndef LONGTAIL__LANE_GRAPH_HPP_
#define LONGTAIL__LANE_GRAPH_HPP_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "longtail/geometry.hpp"

namespace longtail
{

using LaneId = std::string;

struct LaneSegment
{
  LaneId id;
  Polyline centerline;
  double width{3.5};
  double speed_limit{13.4};
  std::vector<LaneId> successors;
  std::optional<LaneId> left_neighbor;
  std::optional<LaneId> right_neighbor;

  bool operator==(const LaneSegment &) const = default;
};

class GraphError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Where a point sits relative to one lane.
struct LanePosition
{
  LaneId lane;
  FrenetPoint frenet;
  double lane_heading{0.0};
};

class LaneGraph
{
public:
  LaneGraph() = default;
  /// Validates ids, neighbor symmetry and self-loops; throws GraphError.
  LaneGraph(std::vector<LaneSegment> segments, std::vector<Polygon> drivable_area);

  const std::map<LaneId, LaneSegment> & segments() const { return segments_; }
  const std::vector<Polygon> & drivable_area() const { return drivable_area_; }
  bool contains(const LaneId & id) const { return segments_.count(id) > 0; }
  /// Throws GraphError for unknown ids.
  const LaneSegment & lane(const LaneId & id) const;

  /// Lanes whose corridor contains p, sorted by |d|.
  std::vector<LanePosition> lanes_containing(const Vec2 & p) const;

  /// Best lane for a vehicle at `pose`: corridor membership first, then
  /// same driving direction, then |d|, then id. Falls back to the nearest lane.
  LanePosition locate(const Pose2D & pose) const;

  bool operator==(const LaneGraph &) const = default;

private:
  std::map<LaneId, LaneSegment> segments_;
  std::vector<Polygon> drivable_area_;
};

/// Polygon of the lane corridor (left boundary then reversed right boundary).
Polygon lane_corridor_polygon(const LaneSegment & lane);

struct Route
{
  std::vector<LaneId> lane_sequence;
  Pose2D goal_pose;

  bool operator==(const Route &) const = default;
};

class NoRoute : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Fewest lane changes first; successor edges are free. Ties resolved by
/// lexicographic comparison of the lane sequence.
Route shortest_route(
  const LaneGraph & graph, const LaneId & start_lane, const LaneId & goal_lane,
  const Pose2D & goal_pose);

bool is_neighbor_hop(const LaneGraph & graph, const LaneId & from, const LaneId & to);
int lane_changes_required(const LaneGraph & graph, const Route & route);
/// Throws GraphError describing the first broken invariant.
void validate_route(const LaneGraph & graph, const Route & route);

/// Centerline of `lane` extended along successors (route lanes preferred)
/// until at least `min_length`, then straight-line extrapolated.
Polyline reference_path(
  const LaneGraph & graph, const LaneId & lane, const Route * route, double min_length);

}  // namespace longtail

#endif  // LONGTAIL__LANE_GRAPH_HPP_
