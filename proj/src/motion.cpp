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

#include "longtail/motion.hpp"

#include <algorithm>
#include <cmath>

#include "longtail/agents.hpp"

namespace longtail
{

OrientedBox WorldObject::box_at(double t) const
{
  if (t == 0.0 || is_static()) {
    return box;
  }
  const Vec2 c = box.center.position() + velocity * t;
  return OrientedBox({c.x, c.y, box.center.heading}, box.length, box.width);
}

std::vector<WorldObject> collect_objects(const Observation & obs)
{
  std::vector<WorldObject> out;
  out.reserve(obs.agents.size() + obs.pedestrians.size() + obs.obstacles.size());
  for (std::size_t i = 0; i < obs.agents.size(); ++i) {
    out.push_back({WorldObject::Kind::Agent, static_cast<int>(i), obs.agents[i].box,
                   obs.agents[i].velocity()});
  }
  for (std::size_t i = 0; i < obs.pedestrians.size(); ++i) {
    out.push_back({WorldObject::Kind::Pedestrian, static_cast<int>(i), obs.pedestrians[i].box,
                   obs.pedestrians[i].velocity});
  }
  for (std::size_t i = 0; i < obs.obstacles.size(); ++i) {
    out.push_back({WorldObject::Kind::Obstacle, static_cast<int>(i), obs.obstacles[i].box, {}});
  }
  return out;
}

double LateralProfile::at(double sigma) const
{
  if (sigma <= 0.0) {
    return d0;
  }
  if (sigma >= length) {
    return d1;
  }
  const double u = sigma / length;
  const double u2 = u * u;
  const double u3 = u2 * u;
  // Hermite quintic basis with zero second derivatives at both ends.
  const double h0 = 1.0 - 10.0 * u3 + 15.0 * u3 * u - 6.0 * u3 * u2;
  const double h1 = u - 6.0 * u3 + 8.0 * u3 * u - 3.0 * u3 * u2;
  return d0 * h0 + slope0 * length * h1 + d1 * (1.0 - h0);
}

double LateralProfile::slope(double sigma) const
{
  if (sigma < 0.0) {
    return slope0;
  }
  if (sigma >= length) {
    return 0.0;
  }
  const double u = sigma / length;
  const double u2 = u * u;
  const double dh0 = -30.0 * u2 + 60.0 * u2 * u - 30.0 * u2 * u2;
  const double dh1 = 1.0 - 18.0 * u2 + 32.0 * u2 * u - 15.0 * u2 * u2;
  return (d0 - d1) * dh0 / length + slope0 * dh1;
}

double blend_length(double speed)
{
  return std::max(3.0 * std::max(speed, 0.0), 12.0);
}

LateralProfile make_lateral_profile(double d0, double slope0, double d1, double speed)
{
  double length = blend_length(speed);
  const double remaining = d1 - d0;
  if (slope0 * remaining > 0.0) {
    // Mid-maneuver: the rest of a quintic blend, which leaves its inflection
    // point with slope 15/8 of the remaining offset per length.
    length = std::clamp(1.875 * std::abs(remaining) / std::abs(slope0), kMinBlendLength, length);
  }
  return {d0, slope0, d1, length};
}

PathFrame make_path_frame(const Observation & obs, const LaneId & lane)
{
  const auto & seg = obs.graph->lane(lane);
  const Pose2D & pose = obs.ego.box.center;
  const FrenetPoint on_lane = project_to_centerline(pose.position(), seg.centerline);
  PathFrame frame;
  frame.path = reference_path(*obs.graph, lane, &obs.route, on_lane.s + 250.0);
  const FrenetPoint f = project_to_centerline(pose.position(), frame.path);
  frame.s0 = f.s;
  frame.d0 = f.d;
  const double rel = std::clamp(
    normalize_angle(pose.heading - frame.path.heading_at(f.s)), -0.7, 0.7);
  frame.slope0 = std::tan(rel);
  frame.speed_limit = seg.speed_limit;
  return frame;
}

std::vector<PathObject> project_objects(
  const PathFrame & frame, const std::vector<WorldObject> & objects, double max_range)
{
  std::vector<PathObject> out;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto & o = objects[i];
    const LaneFootprint fp = footprint_on(o.box, frame.path);
    if (fp.s_center - frame.s0 > max_range || fp.s_center - frame.s0 < -max_range) {
      continue;
    }
    const Vec2 t = unit_from_heading(frame.path.heading_at(fp.s_center));
    PathObject p;
    p.object = static_cast<int>(i);
    p.s_center = fp.s_center;
    p.d_center = fp.d_center;
    p.half_s = fp.s_center - fp.s_min;
    p.ext_s = fp.s_max - fp.s_center;
    p.d_lo = fp.d_min - fp.d_center;
    p.d_hi = fp.d_max - fp.d_center;
    p.vs = dot(o.velocity, t);
    p.vd = cross(t, o.velocity);
    out.push_back(p);
  }
  return out;
}

Rollout rollout(
  const PathFrame & frame, const LateralProfile & lateral, const SpeedProfile & speed,
  double ego_speed, const std::vector<PathObject> & objects, const RolloutOptions & opts)
{
  Rollout out;
  out.trajectory.samples.reserve(kTrajectorySamples);
  out.s.reserve(kTrajectorySamples);
  const double half_len = 0.5 * kCarLength;
  const double half_wid = 0.5 * kCarWidth + opts.corridor_margin;
  const double path_len = frame.path.length();
  const bool stop = speed.kind == SpeedProfile::Kind::FullStop || speed.target_speed < 0.1;
  IdmParams idm = opts.idm;
  idm.desired_speed = std::max(speed.target_speed, 0.1);

  double s = frame.s0;
  double v = std::max(0.0, ego_speed);
  for (int i = 0; i < kTrajectorySamples; ++i) {
    const double t = i * kTrajectoryStep;
    const double sigma = s - frame.s0;
    const double sc = std::min(s, path_len);
    Pose2D tangent = frenet_to_cartesian({sc, lateral.at(sigma)}, frame.path);
    out.trajectory.samples.push_back(
      {t, Pose2D(tangent.x, tangent.y, tangent.heading + std::atan(lateral.slope(sigma))), v});
    out.s.push_back(s);
    if (i + 1 == kTrajectorySamples) {
      break;
    }

    double accel;
    if (stop) {
      accel = -kFallbackDecel;
    } else {
      const double front = s + half_len;
      const double tau = std::min(t, opts.forecast_window);
      const bool frozen = t >= opts.forecast_window;
      std::optional<Lead> lead;
      for (const auto & o : objects) {
        const double oc = o.s_center + o.vs * tau;
        if (oc <= s) {
          continue;
        }
        const double o_min = oc - o.half_s;
        const double dc = o.d_center + o.vd * tau;
        const double de = lateral.at(std::max(o_min, front) - frame.s0);
        if (dc + o.d_hi < de - half_wid || dc + o.d_lo > de + half_wid) {
          continue;
        }
        const double gap = std::max(o_min - front, 0.01);
        if (!lead || gap < lead->gap) {
          lead = Lead{frozen ? 0.0 : o.vs, gap};
        }
      }
      accel = lead ? idm_acceleration(v, lead->speed, lead->gap, idm)
                   : idm_acceleration(v, std::nullopt, std::nullopt, idm);
    }
    const double v_next = std::max(0.0, v + accel * kTrajectoryStep);
    out.max_abs_accel = std::max(out.max_abs_accel, std::abs(v_next - v) / kTrajectoryStep);
    s += v_next * kTrajectoryStep;
    v = v_next;
  }
  out.progress = out.s.back() - frame.s0;
  return out;
}

}  // namespace longtail
