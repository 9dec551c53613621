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

#include "longtail/waypoints_planner.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace longtail
{

Trajectory waypoints_to_trajectory(
  const std::array<Vec2, kWaypointCount> & waypoints, const Pose2D & ego)
{
  std::vector<double> xs{0.0};
  std::vector<double> ys{0.0};
  for (const auto & w : waypoints) {
    xs.push_back(w.x);
    ys.push_back(w.y);
  }
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  const Spline sx(xs.begin(), xs.end(), 0.0, kWaypointStep);
  const Spline sy(ys.begin(), ys.end(), 0.0, kWaypointStep);

  std::vector<Vec2> local(kTrajectorySamples);
  for (int k = 0; k < kTrajectorySamples; ++k) {
    const double t = std::min(k * kTrajectoryStep, kWaypointCount * kWaypointStep);
    local[k] = {sx(t), sy(t)};
  }

  const Vec2 f = unit_from_heading(ego.heading);
  const Vec2 l{-f.y, f.x};
  Trajectory traj;
  traj.samples.resize(kTrajectorySamples);
  double heading = 0.0;
  for (int k = 0; k < kTrajectorySamples; ++k) {
    const int a = k + 1 < kTrajectorySamples ? k : k - 1;
    const Vec2 step = local[a + 1] - local[a];
    if (step.norm() > 1e-3) {
      heading = std::atan2(step.y, step.x);
    }
    const int lo = std::max(k - 1, 0);
    const int hi = std::min(k + 1, kTrajectorySamples - 1);
    const double speed = (local[hi] - local[lo]).norm() / ((hi - lo) * kTrajectoryStep);
    const Vec2 p = ego.position() + f * local[k].x + l * local[k].y;
    traj.samples[k] = {k * kTrajectoryStep, {p.x, p.y, normalize_angle(ego.heading + heading)},
                       speed};
  }
  return traj;
}

WaypointsPlanner::WaypointsPlanner(std::shared_ptr<ChatClient> client) : client_(std::move(client))
{
  if (!client_) {
    throw std::invalid_argument("waypoints planner needs a chat client");
  }
}

Trajectory WaypointsPlanner::plan_impl(const Observation & obs)
{
  const auto second = static_cast<long long>(std::floor(obs.time + 1e-9));
  if (!cached_ || !last_query_second_ || second != *last_query_second_) {
    last_query_second_ = second;
    cached_.reset();
    LlmExchange ex;
    ex.time = obs.time;
    ex.prompt = build_waypoints_prompt(obs);
    try {
      ex.response = client_->complete(ex.prompt);
      const auto waypoints = parse_waypoints_response(ex.response);
      cached_ = waypoints_to_trajectory(waypoints, obs.ego.box.center);
      cached_time_ = obs.time;
    } catch (const std::exception & e) {
      ex.error = e.what();
      log_.push_back(std::move(ex));
      throw;
    }
    log_.push_back(std::move(ex));
    return *cached_;
  }
  // Replay the cached plan from the current time; the tail holds the last pose.
  const double offset = obs.time - cached_time_;
  Trajectory out;
  out.samples.resize(kTrajectorySamples);
  for (int k = 0; k < kTrajectorySamples; ++k) {
    TrajectorySample s = cached_->at(offset + k * kTrajectoryStep);
    if (offset + k * kTrajectoryStep > kTrajectoryHorizon) {
      s.speed = 0.0;
    }
    s.t = k * kTrajectoryStep;
    out.samples[k] = s;
  }
  return out;
}

}  // namespace longtail
