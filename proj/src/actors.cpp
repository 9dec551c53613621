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

#include "longtail/actors.hpp"

#include <stdexcept>
#include <string>

namespace longtail
{

std::string_view to_string(ObstacleKind kind)
{
  switch (kind) {
    case ObstacleKind::Cone:
      return "cone";
    case ObstacleKind::ParkedVehicle:
      return "parked_vehicle";
    case ObstacleKind::CrashedVehicle:
      return "crashed_vehicle";
    case ObstacleKind::StoppedBus:
      return "stopped_bus";
  }
  return "cone";
}

ObstacleKind obstacle_kind_from_string(std::string_view name)
{
  for (auto k : {ObstacleKind::Cone, ObstacleKind::ParkedVehicle, ObstacleKind::CrashedVehicle,
                 ObstacleKind::StoppedBus}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  throw std::invalid_argument("unknown obstacle kind '" + std::string(name) + "'");
}

std::string_view to_string(AgentPolicy policy)
{
  return policy == AgentPolicy::Conservative ? "conservative" : "assertive";
}

AgentPolicy agent_policy_from_string(std::string_view name)
{
  if (name == "conservative") {
    return AgentPolicy::Conservative;
  }
  if (name == "assertive") {
    return AgentPolicy::Assertive;
  }
  throw std::invalid_argument("unknown agent policy '" + std::string(name) + "'");
}

void IdmParams::validate() const
{
  if (!(desired_speed > 0.0) || !(time_headway > 0.0) || !(min_gap > 0.0) ||
      !(max_accel > 0.0) || !(comfort_decel > 0.0) || !(exponent >= 1.0)) {
    throw std::invalid_argument("IDM parameters must be positive with exponent >= 1");
  }
}

IdmParams IdmParams::for_speed_limit(double speed_limit)
{
  IdmParams p;
  p.desired_speed = speed_limit;
  return p;
}

AgentState make_agent(
  const LaneGraph & graph, int id, const LaneId & lane, double s, double speed,
  AgentPolicy policy, const IdmParams & params)
{
  const auto & seg = graph.lane(lane);
  AgentState a;
  a.id = id;
  a.lane = lane;
  a.s = s;
  a.speed = speed;
  a.policy = policy;
  a.params = params;
  a.box = OrientedBox(frenet_to_cartesian({s, 0.0}, seg.centerline), a.length, a.width);
  return a;
}

std::string_view to_string(PedestrianPhase phase)
{
  switch (phase) {
    case PedestrianPhase::Waiting:
      return "waiting";
    case PedestrianPhase::Crossing:
      return "crossing";
    case PedestrianPhase::Done:
      return "done";
  }
  return "waiting";
}

Vec2 PedestrianState::velocity() const
{
  if (phase != PedestrianPhase::Crossing) {
    return {};
  }
  return unit_from_heading(path.heading_at(progress)) * walk_speed;
}

OrientedBox PedestrianState::box() const
{
  const double heading = path.heading_at(progress);
  return OrientedBox({position.x, position.y, heading}, kPedestrianSize, kPedestrianSize);
}

PedestrianState make_pedestrian(int id, Polyline path, double walk_speed, double trigger_distance)
{
  if (!(walk_speed > 0.0) || !(trigger_distance > 0.0)) {
    throw std::invalid_argument("pedestrian walk speed and trigger distance must be positive");
  }
  PedestrianState p;
  p.id = id;
  p.position = path.points().front();
  p.path = std::move(path);
  p.walk_speed = walk_speed;
  p.trigger_distance = trigger_distance;
  return p;
}

}  // namespace longtail
