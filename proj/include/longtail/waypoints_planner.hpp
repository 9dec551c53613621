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

#ifndef LONGTAIL__WAYPOINTS_PLANNER_HPP_
#define LONGTAIL__WAYPOINTS_PLANNER_HPP_

#include <array>
#include <memory>
#include <optional>
#include <string>

#include "longtail/llm.hpp"

namespace longtail
{

/// Cubic B-spline through the ego origin and 16 ego-frame waypoints, sampled
/// on the trajectory grid and mapped to the world frame.
Trajectory waypoints_to_trajectory(
  const std::array<Vec2, kWaypointCount> & waypoints, const Pose2D & ego);

/// The model writes the trajectory itself; queried at 1 Hz, and the last
/// answer is replayed from the current time between queries.
class WaypointsPlanner : public Planner
{
public:
  explicit WaypointsPlanner(std::shared_ptr<ChatClient> client);

  std::string name() const override { return "llm_waypoints"; }
  const std::vector<LlmExchange> & exchanges() const { return log_; }

protected:
  Trajectory plan_impl(const Observation & obs) override;

private:
  std::shared_ptr<ChatClient> client_;
  std::vector<LlmExchange> log_;
  std::optional<long long> last_query_second_;
  std::optional<Trajectory> cached_;
  double cached_time_{0.0};
};

}  // namespace longtail

#endif  // LONGTAIL__WAYPOINTS_PLANNER_HPP_
