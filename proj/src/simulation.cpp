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

#include "longtail/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "longtail/agents.hpp"
#include "longtail/motion.hpp"

namespace longtail
{

namespace
{

constexpr int kPlanStride = 5;
constexpr double kLateralIntrusionSpeed = 0.2;  // m/s

AgentSnapshot snapshot_of(const AgentState & a)
{
  return {a.id, a.lane, a.s, a.speed, a.active, a.box};
}

PedestrianSnapshot snapshot_of(const PedestrianState & p)
{
  return {p.id, p.position, p.velocity(), p.phase, p.box()};
}

Snapshot make_snapshot(
  int tick, double time, const EgoState & ego, const std::vector<AgentState> & agents,
  const std::vector<PedestrianState> & pedestrians)
{
  Snapshot s;
  s.tick = tick;
  s.time = time;
  s.ego = ego;
  for (const auto & a : agents) {
    s.agents.push_back(snapshot_of(a));
  }
  for (const auto & p : pedestrians) {
    s.pedestrians.push_back(snapshot_of(p));
  }
  return s;
}

Vec2 velocity_of(const Snapshot & snap, ActorKind kind, int index)
{
  switch (kind) {
    case ActorKind::Ego:
      return unit_from_heading(snap.ego.box.center.heading) * snap.ego.speed;
    case ActorKind::Agent: {
      const auto & a = snap.agents.at(index);
      return unit_from_heading(a.box.center.heading) * a.speed;
    }
    case ActorKind::Pedestrian:
      return snap.pedestrians.at(index).velocity;
    case ActorKind::Obstacle:
      return {};
  }
  return {};
}

OrientedBox box_of(const ScenarioSpec & spec, const Snapshot & snap, ActorKind kind, int index)
{
  switch (kind) {
    case ActorKind::Ego:
      return snap.ego.box;
    case ActorKind::Agent:
      return snap.agents.at(index).box;
    case ActorKind::Pedestrian:
      return snap.pedestrians.at(index).box;
    case ActorKind::Obstacle:
      return spec.obstacles.at(index).box;
  }
  return {};
}

}  // namespace

void SimConfig::validate(double scenario_duration) const
{
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("simulation step must be positive");
  }
  const double d = duration.value_or(scenario_duration);
  if (!(d > 0.0)) {
    throw std::invalid_argument("simulation duration must be positive");
  }
  const double ticks = d / dt;
  if (std::abs(ticks - std::round(ticks)) > 1e-6) {
    throw std::invalid_argument("simulation duration must be a multiple of the step");
  }
  if (!(wheelbase > 0.0) || !(min_lookahead > 0.0) || lookahead_time < 0.0 || !(speed_gain > 0.0)) {
    throw std::invalid_argument("controller parameters must be positive");
  }
}

int SimConfig::tick_count(double scenario_duration) const
{
  return static_cast<int>(std::lround(duration.value_or(scenario_duration) / dt));
}

EgoState kinematic_bicycle_step(
  const EgoState & s, double steer_cmd, double accel_cmd, const SimConfig & cfg, double dt)
{
  const double steer = std::clamp(steer_cmd, -kMaxSteering, kMaxSteering);
  const double accel = std::clamp(accel_cmd, -kEmergencyDecel, kMaxEgoAccel);
  const Pose2D & p = s.box.center;
  const Vec2 pos = p.position() + unit_from_heading(p.heading) * (s.speed * dt);
  const double heading = p.heading + s.speed / cfg.wheelbase * std::tan(steer) * dt;
  EgoState next = s;
  next.box = OrientedBox({pos.x, pos.y, heading}, s.box.length, s.box.width);
  next.speed = std::max(0.0, s.speed + accel * dt);
  next.accel = (next.speed - s.speed) / dt;
  next.steering = steer;
  return next;
}

ControlCommand track_trajectory(const Trajectory & traj, const EgoState & ego, const SimConfig & cfg)
{
  std::vector<Vec2> pts;
  for (const auto & s : traj.samples) {
    const Vec2 p = s.pose.position();
    if (pts.empty() || (p - pts.back()).norm() > 1e-6) {
      pts.push_back(p);
    }
  }
  if (pts.size() < 2) {
    return {0.0, -kEmergencyDecel};
  }
  const Polyline path(std::move(pts));
  const Pose2D & pose = ego.box.center;
  const double lookahead = std::max(cfg.min_lookahead, cfg.lookahead_time * ego.speed);
  const double target_s = project_to_centerline(pose.position(), path).s + lookahead;
  Vec2 target;
  if (target_s <= path.length()) {
    target = path.point_at(target_s);
  } else {
    target = path.points().back() +
             unit_from_heading(path.heading_at(path.length())) * (target_s - path.length());
  }
  const Vec2 f = unit_from_heading(pose.heading);
  const Vec2 r = target - pose.position();
  const double alpha = std::atan2(cross(f, r), dot(f, r));
  const double dist = std::max(r.norm(), 1e-6);
  const double curvature = 2.0 * std::sin(alpha) / dist;
  ControlCommand cmd;
  cmd.steer = std::atan(cfg.wheelbase * curvature);
  cmd.accel = cfg.speed_gain * (traj.at(cfg.dt).speed - ego.speed);
  return cmd;
}

Observation build_observation(
  const ScenarioSpec & spec, const EgoState & ego, const std::vector<AgentState> & agents,
  const std::vector<PedestrianState> & pedestrians, double time, double radius)
{
  Observation obs;
  obs.ego = {ego.box, ego.speed, ego.accel};
  obs.graph = spec.graph;
  obs.route = spec.route;
  obs.time = time;
  const Vec2 c = ego.box.center.position();
  auto within = [&](const Vec2 & p) { return (p - c).norm() <= radius; };
  for (const auto & a : agents) {
    if (a.active && within(a.box.center.position())) {
      obs.agents.push_back({a.id, a.box, a.speed, a.lane});
    }
  }
  for (const auto & p : pedestrians) {
    if (within(p.position)) {
      obs.pedestrians.push_back({p.id, p.position, p.velocity(), p.phase, p.box()});
    }
  }
  for (const auto & o : spec.obstacles) {
    if (within(o.box.center.position())) {
      obs.obstacles.push_back(o);
    }
  }
  return obs;
}

std::vector<Contact> detect_contacts(const ScenarioSpec & spec, const Snapshot & snap)
{
  std::vector<Contact> out;
  const OrientedBox & ego = snap.ego.box;
  for (std::size_t i = 0; i < snap.agents.size(); ++i) {
    if (snap.agents[i].active && boxes_collide(ego, snap.agents[i].box)) {
      out.push_back({ActorKind::Ego, -1, ActorKind::Agent, static_cast<int>(i)});
    }
  }
  for (std::size_t i = 0; i < snap.pedestrians.size(); ++i) {
    if (boxes_collide(ego, snap.pedestrians[i].box)) {
      out.push_back({ActorKind::Ego, -1, ActorKind::Pedestrian, static_cast<int>(i)});
    }
  }
  for (std::size_t i = 0; i < spec.obstacles.size(); ++i) {
    if (boxes_collide(ego, spec.obstacles[i].box)) {
      out.push_back({ActorKind::Ego, -1, ActorKind::Obstacle, static_cast<int>(i)});
    }
  }
  for (std::size_t i = 0; i < snap.agents.size(); ++i) {
    if (!snap.agents[i].active) {
      continue;
    }
    for (std::size_t j = i + 1; j < snap.agents.size(); ++j) {
      if (snap.agents[j].active && boxes_collide(snap.agents[i].box, snap.agents[j].box)) {
        out.push_back(
          {ActorKind::Agent, static_cast<int>(i), ActorKind::Agent, static_cast<int>(j)});
      }
    }
  }
  return out;
}

bool ego_at_fault(
  const ScenarioSpec & spec, const Snapshot & prev, const Snapshot & now, const Contact & c)
{
  if (c.first != ActorKind::Ego) {
    return false;
  }
  if (std::max(prev.ego.speed, now.ego.speed) < kStaticSpeed) {
    return false;
  }
  const Vec2 other_v = velocity_of(now, c.second, c.second_index);
  if (other_v.norm() < kStaticSpeed) {
    return true;
  }
  const Pose2D & ego = now.ego.box.center;
  const Vec2 rel = box_of(spec, now, c.second, c.second_index).center.position() - ego.position();
  if (dot(rel, unit_from_heading(ego.heading)) > 0.0) {
    return true;
  }
  // Struck from behind or the side: blame only a lateral move toward the other.
  const LanePosition lp = spec.graph->locate(ego);
  const Vec2 t = unit_from_heading(lp.lane_heading);
  const double dt = std::max(now.time - prev.time, 1e-9);
  const Vec2 ego_v = (ego.position() - prev.ego.box.center.position()) * (1.0 / dt);
  const double lateral = cross(t, ego_v);
  const double side = cross(t, rel);
  return lateral * (side >= 0.0 ? 1.0 : -1.0) > kLateralIntrusionSpeed;
}

double offroad_fraction(const OrientedBox & box, const LaneGraph & graph)
{
  const auto & area = graph.drivable_area();
  bool inside = point_in_any(box.center.position(), area);
  for (const auto & c : box.corners()) {
    inside = inside && point_in_any(c, area);
  }
  if (inside) {
    return 0.0;
  }
  return fraction_outside_drivable(box, area);
}

std::string_view to_string(ActorKind kind)
{
  switch (kind) {
    case ActorKind::Ego:
      return "ego";
    case ActorKind::Agent:
      return "agent";
    case ActorKind::Pedestrian:
      return "pedestrian";
    case ActorKind::Obstacle:
      return "obstacle";
  }
  return "ego";
}

std::string_view to_string(EventKind kind)
{
  switch (kind) {
    case EventKind::Collision:
      return "collision";
    case EventKind::AreaExit:
      return "area_exit";
    case EventKind::BehaviorSwitch:
      return "behavior_switch";
  }
  return "collision";
}

ActorKind actor_kind_from_string(std::string_view name)
{
  for (auto k : {ActorKind::Ego, ActorKind::Agent, ActorKind::Pedestrian, ActorKind::Obstacle}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  throw std::invalid_argument("unknown actor kind '" + std::string(name) + "'");
}

EventKind event_kind_from_string(std::string_view name)
{
  for (auto k : {EventKind::Collision, EventKind::AreaExit, EventKind::BehaviorSwitch}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  throw std::invalid_argument("unknown event kind '" + std::string(name) + "'");
}

SimTrace run_closed_loop(const ScenarioSpec & spec, Planner & planner, const SimConfig & cfg)
{
  cfg.validate(spec.duration);
  const int ticks = cfg.tick_count(spec.duration);
  const LaneGraph & graph = *spec.graph;

  SimTrace trace;
  trace.scenario = spec.name;
  trace.type = spec.type;
  trace.seed = spec.seed;
  trace.planner = planner.name();
  trace.dt = cfg.dt;

  EgoState ego{spec.ego_box(), spec.ego.speed, 0.0, 0.0};
  std::vector<AgentState> agents = spec.agents;
  std::vector<PedestrianState> pedestrians = spec.pedestrians;

  std::set<Contact> touching;
  bool offroad = false;
  std::optional<std::string> behavior;
  auto log_state_events = [&](const Snapshot * prev, const Snapshot & now) {
    std::set<Contact> current;
    for (const auto & c : detect_contacts(spec, now)) {
      current.insert(c);
      if (touching.count(c) > 0) {
        continue;
      }
      SimEvent e;
      e.kind = EventKind::Collision;
      e.tick = now.tick;
      e.time = now.time;
      e.first = c.first;
      e.first_index = c.first_index;
      e.second = c.second;
      e.second_index = c.second_index;
      e.at_fault = ego_at_fault(spec, prev ? *prev : now, now, c);
      trace.events.push_back(e);
    }
    touching = std::move(current);
    const bool off = offroad_fraction(now.ego.box, graph) > kOffroadTolerance;
    if (off && !offroad) {
      SimEvent e;
      e.kind = EventKind::AreaExit;
      e.tick = now.tick;
      e.time = now.time;
      trace.events.push_back(e);
    }
    offroad = off;
  };

  trace.snapshots.reserve(ticks + 1);
  trace.snapshots.push_back(make_snapshot(0, 0.0, ego, agents, pedestrians));
  log_state_events(nullptr, trace.snapshots.back());

  for (int k = 0; k < ticks; ++k) {
    const double t = k * cfg.dt;
    const Observation obs = build_observation(spec, ego, agents, pedestrians, t, cfg.perception_radius);
    const Trajectory traj = planner.plan(obs);

    Snapshot & snap = trace.snapshots.back();
    for (std::size_t i = 0; i < traj.samples.size(); i += kPlanStride) {
      snap.plan.push_back(traj.samples[i]);
    }
    snap.behavior = planner.current_behavior();
    if (snap.behavior != behavior) {
      SimEvent e;
      e.kind = EventKind::BehaviorSwitch;
      e.tick = k;
      e.time = t;
      e.detail = behavior.value_or("none") + " -> " + snap.behavior.value_or("none");
      trace.events.push_back(e);
      behavior = snap.behavior;
    }

    const ControlCommand cmd = track_trajectory(traj, ego, cfg);
    const LaneOccupancy occupancy(graph, agents, pedestrians, spec.obstacles, ego.box, ego.speed);
    std::vector<AgentState> next_agents;
    next_agents.reserve(agents.size());
    for (const auto & a : agents) {
      next_agents.push_back(step_vehicle_agent(a, select_lead(a, graph, occupancy), graph, cfg.dt));
    }
    for (auto & p : pedestrians) {
      p = step_pedestrian(p, ego.box.center, ego.speed, cfg.dt);
    }
    agents = std::move(next_agents);
    ego = kinematic_bicycle_step(ego, cmd.steer, cmd.accel, cfg, cfg.dt);

    trace.snapshots.push_back(make_snapshot(k + 1, (k + 1) * cfg.dt, ego, agents, pedestrians));
    log_state_events(&trace.snapshots[trace.snapshots.size() - 2], trace.snapshots.back());
  }
  trace.fallback_count = planner.fallback_count();
  return trace;
}

}  // namespace longtail
