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

#ifndef LONGTAIL__SIMULATION_HPP_
#define LONGTAIL__SIMULATION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "longtail/planning.hpp"
#include "longtail/scenario.hpp"

namespace longtail
{

inline constexpr double kMaxSteering = 0.6;     // rad
inline constexpr double kMaxEgoAccel = 4.0;     // m/s^2
inline constexpr double kPerceptionRadius = 100.0;
/// Fraction of the ego footprint allowed outside the drivable area.
inline constexpr double kOffroadTolerance = 0.05;

struct SimConfig
{
  double dt{0.1};
  /// Unset: the scenario's own duration.
  std::optional<double> duration;
  double wheelbase{3.1};
  double min_lookahead{4.0};   // m
  double lookahead_time{0.5};  // s
  double speed_gain{10.0};     // 1/s
  double perception_radius{kPerceptionRadius};

  /// Throws std::invalid_argument.
  void validate(double scenario_duration) const;
  int tick_count(double scenario_duration) const;
};

struct EgoState
{
  OrientedBox box;
  double speed{0.0};
  double accel{0.0};
  double steering{0.0};

  bool operator==(const EgoState &) const = default;
};

/// Explicit Euler on the kinematic bicycle, referenced at the box center.
EgoState kinematic_bicycle_step(
  const EgoState & s, double steer_cmd, double accel_cmd, const SimConfig & cfg, double dt);

struct ControlCommand
{
  double steer{0.0};
  double accel{0.0};
};

/// Pure pursuit on the trajectory path plus proportional speed control
/// toward the reference at t = dt.
ControlCommand track_trajectory(const Trajectory & traj, const EgoState & ego, const SimConfig & cfg);

Observation build_observation(
  const ScenarioSpec & spec, const EgoState & ego, const std::vector<AgentState> & agents,
  const std::vector<PedestrianState> & pedestrians, double time, double radius = kPerceptionRadius);

struct AgentSnapshot
{
  int id{0};
  LaneId lane;
  double s{0.0};
  double speed{0.0};
  bool active{true};
  OrientedBox box;

  bool operator==(const AgentSnapshot &) const = default;
};

struct PedestrianSnapshot
{
  int id{0};
  Vec2 position;
  Vec2 velocity;
  PedestrianPhase phase{PedestrianPhase::Waiting};
  OrientedBox box;

  bool operator==(const PedestrianSnapshot &) const = default;
};

struct Snapshot
{
  int tick{0};
  double time{0.0};
  EgoState ego;
  std::vector<AgentSnapshot> agents;
  std::vector<PedestrianSnapshot> pedestrians;
  std::optional<std::string> behavior;
  /// Trajectory planned at this tick, every fifth sample; empty on the last tick.
  std::vector<TrajectorySample> plan;

  bool operator==(const Snapshot &) const = default;
};

enum class ActorKind { Ego, Agent, Pedestrian, Obstacle };
enum class EventKind { Collision, AreaExit, BehaviorSwitch };

std::string_view to_string(ActorKind kind);
std::string_view to_string(EventKind kind);
ActorKind actor_kind_from_string(std::string_view name);
EventKind event_kind_from_string(std::string_view name);

struct SimEvent
{
  EventKind kind{EventKind::Collision};
  int tick{0};
  double time{0.0};
  ActorKind first{ActorKind::Ego};
  int first_index{-1};
  ActorKind second{ActorKind::Ego};
  int second_index{-1};
  bool at_fault{false};  // collisions only
  std::string detail;

  bool operator==(const SimEvent &) const = default;
};

struct SimTrace
{
  std::string scenario;
  ScenarioType type{ScenarioType::Construction};
  std::uint64_t seed{0};
  std::string planner;
  double dt{0.1};
  std::vector<Snapshot> snapshots;
  std::vector<SimEvent> events;
  int fallback_count{0};

  bool operator==(const SimTrace &) const = default;
};

struct Contact
{
  ActorKind first{ActorKind::Ego};
  int first_index{-1};
  ActorKind second{ActorKind::Agent};
  int second_index{-1};

  auto operator<=>(const Contact &) const = default;
};

/// Every overlapping pair at one snapshot: ego against all actors, then
/// agent against agent. Indices refer to the scenario's actor lists.
std::vector<Contact> detect_contacts(const ScenarioSpec & spec, const Snapshot & snap);

/// Ego blame for a contact first seen at snapshot `now`.
bool ego_at_fault(
  const ScenarioSpec & spec, const Snapshot & prev, const Snapshot & now, const Contact & c);

/// Grid-sampled off-road fraction with a fast path when every corner is on the road.
double offroad_fraction(const OrientedBox & box, const LaneGraph & graph);

SimTrace run_closed_loop(const ScenarioSpec & spec, Planner & planner, const SimConfig & cfg = {});

}  // namespace longtail

#endif  // LONGTAIL__SIMULATION_HPP_
