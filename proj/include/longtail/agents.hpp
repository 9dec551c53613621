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

#ifndef LONGTAIL__AGENTS_HPP_
#define LONGTAIL__AGENTS_HPP_

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "longtail/actors.hpp"

namespace longtail
{

/// Lower clamp on every IDM output.
inline constexpr double kEmergencyDecel = 8.0;

/// Intelligent Driver Model acceleration. Without a lead only the free-road
/// term applies. Throws std::invalid_argument for gap <= 0 with a lead.
double idm_acceleration(
  double speed, std::optional<double> lead_speed, std::optional<double> gap, const IdmParams & p);

/// Largest speed in [0, v0] whose IDM acceleration behind a lead at the same
/// speed is non-negative for the given bumper gap.
double idm_equilibrium_speed(double gap, const IdmParams & p);

struct Lead
{
  double speed{0.0};  // along the follower's lane direction
  double gap{0.0};    // bumper to bumper, m
};

/// One object's footprint expressed in a lane's Frenet frame.
struct LaneFootprint
{
  enum class Source { Agent, Ego, Obstacle, Pedestrian };
  Source source{Source::Agent};
  int index{-1};
  double s_min{0.0};
  double s_max{0.0};
  double d_min{0.0};
  double d_max{0.0};
  double s_center{0.0};
  double d_center{0.0};
  double along_speed{0.0};
};

/// Projects a box's corners onto `line`.
LaneFootprint footprint_on(const OrientedBox & box, const Polyline & line);

/// Footprints per lane for one tick; built once and shared by every agent.
class LaneOccupancy
{
public:
  LaneOccupancy(
    const LaneGraph & graph, std::span<const AgentState> agents,
    std::span<const PedestrianState> pedestrians, std::span<const ObstacleSpec> obstacles,
    const OrientedBox & ego_box, double ego_speed);

  const std::vector<LaneFootprint> & on_lane(const LaneId & lane) const;

private:
  std::map<LaneId, std::vector<LaneFootprint>> per_lane_;
  std::vector<LaneFootprint> empty_;
};

/// Nearest lead ahead of `agent` on its lane. The ego counts for
/// conservative agents as soon as its footprint touches the lane corridor,
/// for assertive agents only once its center is within a quarter lane width
/// of the centerline.
std::optional<Lead> select_lead(
  const AgentState & agent, const LaneGraph & graph, const LaneOccupancy & occupancy);

/// Convenience overload that builds the occupancy for a single query.
std::optional<Lead> select_lead(
  const AgentState & agent, const LaneGraph & graph, std::span<const AgentState> agents,
  std::span<const PedestrianState> pedestrians, std::span<const ObstacleSpec> obstacles,
  const OrientedBox & ego_box, double ego_speed);

/// Advances one IDM step along the lane, following the first successor at the
/// lane end; an agent running off a lane without successor becomes inactive.
AgentState step_vehicle_agent(
  const AgentState & agent, const std::optional<Lead> & lead, const LaneGraph & graph, double dt);

/// Waiting pedestrians start crossing once the ego is approaching and within
/// the trigger distance of the path entry, measured along the ego heading.
PedestrianState step_pedestrian(
  const PedestrianState & ped, const Pose2D & ego_pose, double ego_speed, double dt);

}  // namespace longtail

#endif  // LONGTAIL__AGENTS_HPP_
