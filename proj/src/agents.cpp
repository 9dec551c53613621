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

#include "longtail/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace longtail
{

namespace
{

// Lateral margin added to a vehicle's half width when deciding whether an
// obstacle or pedestrian sits in its driving corridor.
constexpr double kCorridorMargin = 0.5;
constexpr double kMinLeadGap = 0.01;

bool overlaps(double a_min, double a_max, double b_min, double b_max)
{
  return a_max >= b_min && b_max >= a_min;
}

}  // namespace

double idm_acceleration(
  double speed, std::optional<double> lead_speed, std::optional<double> gap, const IdmParams & p)
{
  double a = p.max_accel * (1.0 - std::pow(std::max(speed, 0.0) / p.desired_speed, p.exponent));
  if (lead_speed && gap) {
    if (!(*gap > 0.0)) {
      throw std::invalid_argument("IDM gap must be positive");
    }
    const double dv = speed - *lead_speed;
    const double s_star = p.min_gap +
      std::max(0.0, speed * p.time_headway + speed * dv / (2.0 * std::sqrt(p.max_accel * p.comfort_decel)));
    const double ratio = s_star / *gap;
    a -= p.max_accel * ratio * ratio;
  }
  return std::clamp(a, -kEmergencyDecel, p.max_accel);
}

double idm_equilibrium_speed(double gap, const IdmParams & p)
{
  if (!(gap > 0.0)) {
    return 0.0;
  }
  double lo = 0.0;
  double hi = p.desired_speed;
  if (idm_acceleration(hi, hi, gap, p) >= 0.0) {
    return hi;
  }
  if (idm_acceleration(lo, lo, gap, p) < 0.0) {
    return 0.0;
  }
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (idm_acceleration(mid, mid, gap, p) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

LaneFootprint footprint_on(const OrientedBox & box, const Polyline & line)
{
  LaneFootprint fp;
  fp.s_min = std::numeric_limits<double>::infinity();
  fp.s_max = -fp.s_min;
  fp.d_min = fp.s_min;
  fp.d_max = -fp.s_min;
  for (const auto & c : box.corners()) {
    const FrenetPoint f = project_to_centerline(c, line);
    fp.s_min = std::min(fp.s_min, f.s);
    fp.s_max = std::max(fp.s_max, f.s);
    fp.d_min = std::min(fp.d_min, f.d);
    fp.d_max = std::max(fp.d_max, f.d);
  }
  const FrenetPoint center = project_to_centerline(box.center.position(), line);
  fp.s_center = center.s;
  fp.d_center = center.d;
  return fp;
}

LaneOccupancy::LaneOccupancy(
  const LaneGraph & graph, std::span<const AgentState> agents,
  std::span<const PedestrianState> pedestrians, std::span<const ObstacleSpec> obstacles,
  const OrientedBox & ego_box, double ego_speed)
{
  for (const auto & [id, seg] : graph.segments()) {
    auto & list = per_lane_[id];
    const double half = 0.5 * seg.width;
    const auto & line = seg.centerline;
    auto keep = [&](const LaneFootprint & fp) {
      return overlaps(fp.d_min, fp.d_max, -half, half) && fp.s_max > 0.0 && fp.s_min < line.length();
    };
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const auto & a = agents[i];
      if (!a.active || a.lane != id) {
        continue;
      }
      LaneFootprint fp;
      fp.source = LaneFootprint::Source::Agent;
      fp.index = static_cast<int>(i);
      fp.s_center = a.s;
      fp.s_min = a.s - 0.5 * a.length;
      fp.s_max = a.s + 0.5 * a.length;
      fp.d_min = -0.5 * a.width;
      fp.d_max = 0.5 * a.width;
      fp.along_speed = a.speed;
      list.push_back(fp);
    }
    {
      LaneFootprint fp = footprint_on(ego_box, line);
      if (keep(fp)) {
        fp.source = LaneFootprint::Source::Ego;
        fp.along_speed = ego_speed * std::cos(ego_box.center.heading - line.heading_at(fp.s_center));
        list.push_back(fp);
      }
    }
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
      LaneFootprint fp = footprint_on(obstacles[i].box, line);
      if (keep(fp)) {
        fp.source = LaneFootprint::Source::Obstacle;
        fp.index = static_cast<int>(i);
        list.push_back(fp);
      }
    }
    for (std::size_t i = 0; i < pedestrians.size(); ++i) {
      LaneFootprint fp = footprint_on(pedestrians[i].box(), line);
      if (keep(fp)) {
        fp.source = LaneFootprint::Source::Pedestrian;
        fp.index = static_cast<int>(i);
        list.push_back(fp);
      }
    }
  }
}

const std::vector<LaneFootprint> & LaneOccupancy::on_lane(const LaneId & lane) const
{
  const auto it = per_lane_.find(lane);
  return it == per_lane_.end() ? empty_ : it->second;
}

std::optional<Lead> select_lead(
  const AgentState & agent, const LaneGraph & graph, const LaneOccupancy & occupancy)
{
  const auto & seg = graph.lane(agent.lane);
  const double front = agent.s + 0.5 * agent.length;
  const double corridor = 0.5 * agent.width + kCorridorMargin;
  std::optional<Lead> best;
  for (const auto & fp : occupancy.on_lane(agent.lane)) {
    if (fp.s_center <= agent.s) {
      continue;
    }
    switch (fp.source) {
      case LaneFootprint::Source::Agent:
        break;
      case LaneFootprint::Source::Ego:
        if (agent.policy == AgentPolicy::Assertive &&
            !(std::abs(fp.d_center) <= 0.5 * seg.width && std::abs(fp.d_center) < 0.25 * seg.width)) {
          continue;
        }
        break;
      case LaneFootprint::Source::Obstacle:
      case LaneFootprint::Source::Pedestrian:
        if (!overlaps(fp.d_min, fp.d_max, -corridor, corridor)) {
          continue;
        }
        break;
    }
    const double gap = std::max(fp.s_min - front, kMinLeadGap);
    if (!best || gap < best->gap) {
      best = Lead{fp.along_speed, gap};
    }
  }
  return best;
}

std::optional<Lead> select_lead(
  const AgentState & agent, const LaneGraph & graph, std::span<const AgentState> agents,
  std::span<const PedestrianState> pedestrians, std::span<const ObstacleSpec> obstacles,
  const OrientedBox & ego_box, double ego_speed)
{
  const LaneOccupancy occupancy(graph, agents, pedestrians, obstacles, ego_box, ego_speed);
  return select_lead(agent, graph, occupancy);
}

AgentState step_vehicle_agent(
  const AgentState & agent, const std::optional<Lead> & lead, const LaneGraph & graph, double dt)
{
  AgentState next = agent;
  if (!agent.active) {
    return next;
  }
  const double accel = lead ? idm_acceleration(agent.speed, lead->speed, lead->gap, agent.params)
                            : idm_acceleration(agent.speed, std::nullopt, std::nullopt, agent.params);
  next.speed = std::max(0.0, agent.speed + accel * dt);
  next.s = agent.s + next.speed * dt;
  const LaneSegment * seg = &graph.lane(next.lane);
  while (next.s > seg->centerline.length()) {
    if (seg->successors.empty()) {
      next.active = false;
      next.s = seg->centerline.length();
      break;
    }
    next.s -= seg->centerline.length();
    next.lane = seg->successors.front();
    seg = &graph.lane(next.lane);
  }
  next.box = OrientedBox(
    frenet_to_cartesian({next.s, 0.0}, seg->centerline), agent.length, agent.width);
  return next;
}

PedestrianState step_pedestrian(
  const PedestrianState & ped, const Pose2D & ego_pose, double ego_speed, double dt)
{
  PedestrianState next = ped;
  if (ped.phase == PedestrianPhase::Waiting) {
    const Vec2 entry = ped.path.points().front();
    const double ahead = dot(entry - ego_pose.position(), unit_from_heading(ego_pose.heading));
    if (ego_speed > 0.0 && ahead > 0.0 && ahead <= ped.trigger_distance) {
      next.phase = PedestrianPhase::Crossing;
    }
  } else if (ped.phase == PedestrianPhase::Crossing) {
    next.progress = std::min(ped.progress + ped.walk_speed * dt, ped.path.length());
    next.position = ped.path.point_at(next.progress);
    if (next.progress >= ped.path.length()) {
      next.phase = PedestrianPhase::Done;
      next.position = ped.path.points().back();
    }
  }
  return next;
}

}  // namespace longtail
