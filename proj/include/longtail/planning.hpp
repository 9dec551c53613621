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

#ifndef LONGTAIL__PLANNING_HPP_
#define LONGTAIL__PLANNING_HPP_

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "longtail/actors.hpp"
#include "longtail/lane_graph.hpp"

namespace longtail
{

struct EgoObservation
{
  OrientedBox box;
  double speed{0.0};
  double accel{0.0};

  bool operator==(const EgoObservation &) const = default;
};

struct AgentObservation
{
  int id{0};
  OrientedBox box;
  double speed{0.0};  // along the box heading
  LaneId lane;

  Vec2 velocity() const { return unit_from_heading(box.center.heading) * speed; }
  bool operator==(const AgentObservation &) const = default;
};

struct PedestrianObservation
{
  int id{0};
  Vec2 position;
  Vec2 velocity;
  PedestrianPhase phase{PedestrianPhase::Waiting};
  OrientedBox box;

  bool operator==(const PedestrianObservation &) const = default;
};

/// Noise-free snapshot of one simulation tick.
struct Observation
{
  EgoObservation ego;
  std::vector<AgentObservation> agents;
  std::vector<PedestrianObservation> pedestrians;
  std::vector<ObstacleSpec> obstacles;
  std::shared_ptr<const LaneGraph> graph;
  Route route;
  double time{0.0};

  bool operator==(const Observation &) const = default;
};

inline constexpr double kTrajectoryHorizon = 8.0;
inline constexpr double kTrajectoryStep = 0.1;
inline constexpr int kTrajectorySamples = 81;
inline constexpr double kMaxCurvature = 0.5;
/// Deceleration of the fallback trajectory.
inline constexpr double kFallbackDecel = 4.0;

struct TrajectorySample
{
  double t{0.0};
  Pose2D pose;
  double speed{0.0};

  bool operator==(const TrajectorySample &) const = default;
};

class InvalidTrajectory : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Trajectory
{
  std::vector<TrajectorySample> samples;

  /// Throws InvalidTrajectory when an invariant is violated.
  void validate() const;
  bool is_valid() const;
  /// Linear interpolation in time, clamped to the sample range.
  TrajectorySample at(double t) const;
  bool operator==(const Trajectory &) const = default;
};

/// Same-direction lane the ego is driving on: corridor membership first,
/// then route membership, then |d|. Never returns an opposing lane when a
/// same-direction lane exists.
LanePosition ego_reference_lane(const LaneGraph & graph, const Route & route, const Pose2D & pose);

/// Constant-deceleration stop along the current lane centerline.
Trajectory brake_trajectory(const Observation & obs, double decel = kFallbackDecel);

/// Neighbor hops still needed from `lane` to the route's last lane; 0 when
/// the lane is unrelated to the route and no path exists.
int pending_lane_changes(const LaneGraph & graph, const Route & route, const LaneId & lane);

class Planner
{
public:
  virtual ~Planner() = default;
  virtual std::string name() const = 0;

  /// Never throws: internal failures and invalid output become the braking
  /// fallback.
  Trajectory plan(const Observation & obs);

  /// Label of the behavior active after the last plan() call, if any.
  virtual std::optional<std::string> current_behavior() const { return std::nullopt; }

  int fallback_count() const { return fallbacks_; }
  /// Test hook: makes the next plan() fail internally.
  void force_failure(bool enabled) { force_failure_ = enabled; }

protected:
  virtual Trajectory plan_impl(const Observation & obs) = 0;

private:
  int fallbacks_{0};
  bool force_failure_{false};
};

}  // namespace longtail

#endif  // LONGTAIL__PLANNING_HPP_
