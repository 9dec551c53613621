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

#ifndef LONGTAIL__ACTORS_HPP_
#define LONGTAIL__ACTORS_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "longtail/geometry.hpp"
#include "longtail/lane_graph.hpp"

namespace longtail
{

// Footprints shared by the ego and the traffic cars.
inline constexpr double kCarLength = 4.8;
inline constexpr double kCarWidth = 2.0;
inline constexpr double kPedestrianSize = 0.6;

enum class ObstacleKind { Cone, ParkedVehicle, CrashedVehicle, StoppedBus };

std::string_view to_string(ObstacleKind kind);
/// Throws std::invalid_argument for unknown names.
ObstacleKind obstacle_kind_from_string(std::string_view name);

struct ObstacleSpec
{
  ObstacleKind kind{ObstacleKind::Cone};
  OrientedBox box;
  LaneId lane;

  /// Bus stops sit on the shoulder; everything else has to be passed.
  bool blocks_progress() const { return kind != ObstacleKind::StoppedBus; }
  bool operator==(const ObstacleSpec &) const = default;
};

enum class AgentPolicy { Conservative, Assertive };

std::string_view to_string(AgentPolicy policy);
AgentPolicy agent_policy_from_string(std::string_view name);

struct IdmParams
{
  double desired_speed{13.4};   // v0, m/s
  double time_headway{1.5};     // T, s
  double min_gap{4.0};          // s0, m
  double max_accel{1.5};        // m/s^2
  double comfort_decel{2.0};    // m/s^2
  double exponent{4.0};         // delta

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  static IdmParams for_speed_limit(double speed_limit);
  bool operator==(const IdmParams &) const = default;
};

struct AgentState
{
  int id{0};
  LaneId lane;
  double s{0.0};  // arclength of the box center along the lane
  double speed{0.0};
  double length{kCarLength};
  double width{kCarWidth};
  AgentPolicy policy{AgentPolicy::Conservative};
  IdmParams params;
  bool active{true};
  OrientedBox box;

  bool operator==(const AgentState &) const = default;
};

/// Agent placed on its lane centerline at arclength s.
AgentState make_agent(
  const LaneGraph & graph, int id, const LaneId & lane, double s, double speed,
  AgentPolicy policy, const IdmParams & params);

enum class PedestrianPhase { Waiting, Crossing, Done };

std::string_view to_string(PedestrianPhase phase);

struct PedestrianState
{
  int id{0};
  Polyline path;
  double walk_speed{1.5};
  double trigger_distance{30.0};
  PedestrianPhase phase{PedestrianPhase::Waiting};
  double progress{0.0};  // arclength walked along the path
  Vec2 position;

  Vec2 velocity() const;
  OrientedBox box() const;
  bool operator==(const PedestrianState &) const = default;
};

PedestrianState make_pedestrian(int id, Polyline path, double walk_speed, double trigger_distance);

}  // namespace longtail

#endif  // LONGTAIL__ACTORS_HPP_
