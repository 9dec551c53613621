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

#include "longtail/idm_planner.hpp"

#include <cmath>
#include <stdexcept>

#include "longtail/agents.hpp"

namespace longtail
{

namespace
{

struct Occupant
{
  bool is_agent{false};
  double s_min{0.0};
  double s_max{0.0};
  double s_center{0.0};
  double speed{0.0};  // along the lane
};

struct LaneView
{
  const LaneSegment * lane{nullptr};
  double ego_s{0.0};
  std::vector<Occupant> occupants;

  double front() const { return ego_s + 0.5 * kCarLength; }
  double rear() const { return ego_s - 0.5 * kCarLength; }

  std::optional<Occupant> leader() const
  {
    std::optional<Occupant> best;
    for (const auto & o : occupants) {
      if (o.s_center > ego_s && (!best || o.s_min < best->s_min)) {
        best = o;
      }
    }
    return best;
  }

  std::optional<Occupant> follower() const
  {
    std::optional<Occupant> best;
    for (const auto & o : occupants) {
      if (o.is_agent && o.s_center <= ego_s && (!best || o.s_max > best->s_max)) {
        best = o;
      }
    }
    return best;
  }

  bool free_beside_ego() const
  {
    for (const auto & o : occupants) {
      if (o.s_min <= front() && o.s_max >= rear()) {
        return false;
      }
    }
    return true;
  }
};

LaneView view_lane(
  const Observation & obs, const std::vector<WorldObject> & objects, const LaneSegment & lane)
{
  LaneView view;
  view.lane = &lane;
  view.ego_s = project_to_centerline(obs.ego.box.center.position(), lane.centerline).s;
  const double half = 0.5 * lane.width;
  for (const auto & o : objects) {
    const LaneFootprint fp = footprint_on(o.box, lane.centerline);
    if (fp.d_max < -half || fp.d_min > half) {
      continue;
    }
    if (std::abs(fp.s_center - view.ego_s) > 200.0) {
      continue;
    }
    const Vec2 t = unit_from_heading(lane.centerline.heading_at(fp.s_center));
    view.occupants.push_back({o.kind == WorldObject::Kind::Agent, fp.s_min, fp.s_max,
                              fp.s_center, dot(o.velocity, t)});
  }
  return view;
}

double accel_behind(double speed, const std::optional<Occupant> & lead, double front,
                    const IdmParams & p)
{
  if (!lead) {
    return idm_acceleration(speed, std::nullopt, std::nullopt, p);
  }
  return idm_acceleration(speed, lead->speed, std::max(lead->s_min - front, 0.01), p);
}

}  // namespace

void MobilParams::validate() const
{
  if (!(safe_decel > 0.0) || politeness < 0.0 || politeness > 1.0) {
    throw std::invalid_argument("MOBIL needs safe_decel > 0 and politeness in [0, 1]");
  }
}

Trajectory lane_trajectory(const Observation & obs, const LaneId & lane, const IdmParams & params)
{
  const PathFrame frame = make_path_frame(obs, lane);
  const LateralProfile lateral = make_lateral_profile(frame.d0, frame.slope0, 0.0, obs.ego.speed);
  const auto objects = project_objects(frame, collect_objects(obs));
  RolloutOptions opts;
  opts.idm = params;
  const SpeedProfile speed{SpeedProfile::Kind::Idm, frame.speed_limit};
  return rollout(frame, lateral, speed, obs.ego.speed, objects, opts).trajectory;
}

Trajectory idm_planner_plan(const Observation & obs, const IdmParams & params)
{
  const LanePosition lp = ego_reference_lane(*obs.graph, obs.route, obs.ego.box.center);
  return lane_trajectory(obs, lp.lane, params);
}

std::optional<LaneId> mobil_decide(
  const Observation & obs, const MobilParams & mp, const IdmParams & idm)
{
  mp.validate();
  const LaneGraph & graph = *obs.graph;
  const LanePosition lp = ego_reference_lane(graph, obs.route, obs.ego.box.center);
  const LaneSegment & current = graph.lane(lp.lane);
  const auto objects = collect_objects(obs);
  const double v = obs.ego.speed;

  const LaneView cur = view_lane(obs, objects, current);
  IdmParams ego_p = idm;
  ego_p.desired_speed = current.speed_limit;
  const auto cur_leader = cur.leader();
  const double a_cur = accel_behind(v, cur_leader, cur.front(), ego_p);
  const int pending_here = pending_lane_changes(graph, obs.route, current.id);

  // Old follower: loses the ego as lead and gets the ego's lead instead.
  double old_follower_gain = 0.0;
  if (const auto of = cur.follower()) {
    const IdmParams fp = IdmParams::for_speed_limit(current.speed_limit);
    const double before =
      idm_acceleration(of->speed, v, std::max(cur.rear() - of->s_max, 0.01), fp);
    const double after = accel_behind(of->speed, cur_leader, of->s_max, fp);
    old_follower_gain = after - before;
  }

  struct Choice
  {
    LaneId lane;
    double incentive;
    int pending;
  };
  std::vector<Choice> choices;
  for (const auto & neighbor : {current.left_neighbor, current.right_neighbor}) {
    if (!neighbor || !graph.contains(*neighbor)) {
      continue;
    }
    const LaneSegment & target = graph.lane(*neighbor);
    const LaneView tv = view_lane(obs, objects, target);
    if (!tv.free_beside_ego()) {
      continue;
    }
    IdmParams ego_t = idm;
    ego_t.desired_speed = target.speed_limit;
    const auto leader = tv.leader();
    const double a_new = accel_behind(v, leader, tv.front(), ego_t);
    double new_follower_gain = 0.0;
    if (const auto nf = tv.follower()) {
      const IdmParams fp = IdmParams::for_speed_limit(target.speed_limit);
      const double after =
        idm_acceleration(nf->speed, v, std::max(tv.rear() - nf->s_max, 0.01), fp);
      if (after < -mp.safe_decel) {
        continue;
      }
      const double before = accel_behind(nf->speed, leader, nf->s_max, fp);
      new_follower_gain = after - before;
    }
    const int pending_there = pending_lane_changes(graph, obs.route, target.id);
    double bias = 0.0;
    if (pending_there < pending_here) {
      bias = mp.route_bias;
    } else if (pending_there > pending_here) {
      bias = -mp.route_bias;
    }
    const double incentive =
      a_new - a_cur + mp.politeness * (new_follower_gain + old_follower_gain) + bias;
    if (incentive > mp.accel_threshold) {
      choices.push_back({target.id, incentive, pending_there});
    }
  }
  if (choices.empty()) {
    return std::nullopt;
  }
  if (choices.size() == 2 && choices[0].incentive == choices[1].incentive) {
    // Exact tie: only the goal side breaks it.
    if (choices[0].pending == choices[1].pending) {
      return std::nullopt;
    }
    return choices[0].pending < choices[1].pending ? choices[0].lane : choices[1].lane;
  }
  const auto & best = choices.size() == 2 && choices[1].incentive > choices[0].incentive
                        ? choices[1]
                        : choices[0];
  return best.lane;
}

Trajectory idm_mobil_plan(const Observation & obs, const MobilParams & mp, const IdmParams & idm)
{
  if (const auto target = mobil_decide(obs, mp, idm)) {
    return lane_trajectory(obs, *target, idm);
  }
  return idm_planner_plan(obs, idm);
}

Trajectory IdmMobilPlanner::plan_impl(const Observation & obs)
{
  const auto target = mobil_decide(obs, mp_, idm_);
  if (!target) {
    behavior_ = "follow_lane";
    return idm_planner_plan(obs, idm_);
  }
  const LanePosition lp = ego_reference_lane(*obs.graph, obs.route, obs.ego.box.center);
  const auto & current = obs.graph->lane(lp.lane);
  behavior_ = current.left_neighbor == target ? "merge_left" : "merge_right";
  return lane_trajectory(obs, *target, idm_);
}

}  // namespace longtail
