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

#include "longtail/planning.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace longtail
{

void Trajectory::validate() const
{
  if (samples.size() < 2) {
    throw InvalidTrajectory("trajectory needs at least two samples");
  }
  if (samples.front().t != 0.0) {
    throw InvalidTrajectory("trajectory must start at t = 0");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto & s = samples[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.pose.x) || !std::isfinite(s.pose.y) ||
        !std::isfinite(s.pose.heading) || !std::isfinite(s.speed)) {
      throw InvalidTrajectory("trajectory contains non-finite values");
    }
    if (s.speed < 0.0) {
      throw InvalidTrajectory("trajectory speed must be non-negative");
    }
    if (i == 0) {
      continue;
    }
    const auto & p = samples[i - 1];
    if (!(s.t > p.t)) {
      throw InvalidTrajectory("trajectory time must be strictly increasing");
    }
    const double ds = (s.pose.position() - p.pose.position()).norm();
    const double dh = std::abs(normalize_angle(s.pose.heading - p.pose.heading));
    if (dh > kMaxCurvature * ds + 1e-6) {
      throw InvalidTrajectory("trajectory exceeds the curvature limit");
    }
  }
}

bool Trajectory::is_valid() const
{
  try {
    validate();
    return true;
  } catch (const InvalidTrajectory &) {
    return false;
  }
}

TrajectorySample Trajectory::at(double t) const
{
  if (samples.empty()) {
    return {};
  }
  if (t <= samples.front().t) {
    return samples.front();
  }
  if (t >= samples.back().t) {
    return samples.back();
  }
  const auto it = std::upper_bound(
    samples.begin(), samples.end(), t,
    [](double value, const TrajectorySample & s) { return value < s.t; });
  const auto & b = *it;
  const auto & a = *(it - 1);
  const double u = (t - a.t) / (b.t - a.t);
  const double dh = normalize_angle(b.pose.heading - a.pose.heading);
  return {t,
          Pose2D(a.pose.x + u * (b.pose.x - a.pose.x), a.pose.y + u * (b.pose.y - a.pose.y),
                 a.pose.heading + u * dh),
          a.speed + u * (b.speed - a.speed)};
}

LanePosition ego_reference_lane(const LaneGraph & graph, const Route & route, const Pose2D & pose)
{
  // (opposite direction, outside corridor, off route, |d|, id)
  using Key = std::tuple<bool, bool, bool, double, LaneId>;
  std::optional<Key> best_key;
  LanePosition best;
  const auto & seq = route.lane_sequence;
  for (const auto & [id, seg] : graph.segments()) {
    const FrenetPoint f = project_to_centerline(pose.position(), seg.centerline);
    const double h = seg.centerline.heading_at(f.s);
    const bool opposite = std::cos(pose.heading - h) < 0.0;
    const bool outside = std::abs(f.d) > 0.5 * seg.width;
    const bool off_route = std::find(seq.begin(), seq.end(), id) == seq.end();
    Key key{opposite, outside, off_route, std::abs(f.d), id};
    if (!best_key || key < *best_key) {
      best_key = key;
      best = {id, f, h};
    }
  }
  if (!best_key) {
    throw GraphError("ego_reference_lane on empty graph");
  }
  return best;
}

Trajectory brake_trajectory(const Observation & obs, double decel)
{
  const Pose2D & start = obs.ego.box.center;
  Trajectory traj;
  const double v0 = std::max(0.0, obs.ego.speed);
  std::optional<Polyline> path;
  double s0 = 0.0;
  double d0 = 0.0;
  if (obs.graph && !obs.graph->segments().empty()) {
    try {
      const LanePosition lp = ego_reference_lane(*obs.graph, obs.route, start);
      path = reference_path(*obs.graph, lp.lane, &obs.route, lp.frenet.s + v0 * v0 / decel + 10.0);
      s0 = lp.frenet.s;
      d0 = lp.frenet.d;
    } catch (const std::exception &) {
      path.reset();
    }
  }
  for (int i = 0; i < kTrajectorySamples; ++i) {
    const double t = i * kTrajectoryStep;
    const double tt = std::min(t, v0 / decel);
    const double dist = v0 * tt - 0.5 * decel * tt * tt;
    const double v = std::max(0.0, v0 - decel * t);
    Pose2D pose;
    if (path) {
      // Keep the current lateral offset so the fallback never steers.
      pose = frenet_to_cartesian({std::min(s0 + dist, path->length()), d0}, *path);
      if (i == 0) {
        pose = start;
      }
    } else {
      const Vec2 p = start.position() + unit_from_heading(start.heading) * dist;
      pose = Pose2D(p.x, p.y, start.heading);
    }
    traj.samples.push_back({t, pose, v});
  }
  if (!traj.is_valid()) {
    traj.samples.clear();
    for (int i = 0; i < kTrajectorySamples; ++i) {
      const double t = i * kTrajectoryStep;
      const double tt = std::min(t, v0 / decel);
      const Vec2 p =
        start.position() + unit_from_heading(start.heading) * (v0 * tt - 0.5 * decel * tt * tt);
      traj.samples.push_back({t, Pose2D(p.x, p.y, start.heading), std::max(0.0, v0 - decel * t)});
    }
  }
  return traj;
}

int pending_lane_changes(const LaneGraph & graph, const Route & route, const LaneId & lane)
{
  if (route.lane_sequence.empty()) {
    return 0;
  }
  const auto & seq = route.lane_sequence;
  const auto it = std::find(seq.begin(), seq.end(), lane);
  if (it != seq.end()) {
    Route rest{std::vector<LaneId>(it, seq.end()), route.goal_pose};
    return lane_changes_required(graph, rest);
  }
  try {
    const Route r = shortest_route(graph, lane, seq.back(), route.goal_pose);
    return lane_changes_required(graph, r);
  } catch (const NoRoute &) {
    return 0;
  }
}

Trajectory Planner::plan(const Observation & obs)
{
  try {
    if (force_failure_) {
      force_failure_ = false;
      throw std::runtime_error("forced planner failure");
    }
    Trajectory traj = plan_impl(obs);
    traj.validate();
    return traj;
  } catch (const std::exception &) {
    ++fallbacks_;
    return brake_trajectory(obs);
  }
}

}  // namespace longtail
