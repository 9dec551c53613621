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

#ifndef LONGTAIL_TESTS__ORACLES_HPP_
#define LONGTAIL_TESTS__ORACLES_HPP_

// Brute-force references shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include "longtail/geometry.hpp"
#include "longtail/rng.hpp"
#include "longtail/sampling_planner.hpp"
#include "longtail/scenario.hpp"
#include "longtail/simulation.hpp"

namespace longtail::oracle
{

/// Points spread along the boundary of `box`, corners included.
inline std::vector<Vec2> perimeter_points(const OrientedBox & box, int per_edge)
{
  const auto c = box.corners();
  std::vector<Vec2> out;
  out.reserve(4 * per_edge);
  for (int e = 0; e < 4; ++e) {
    const Vec2 a = c[e];
    const Vec2 b = c[(e + 1) % 4];
    for (int i = 0; i < per_edge; ++i) {
      out.push_back(a + (b - a) * (static_cast<double>(i) / per_edge));
    }
  }
  return out;
}

/// Two rectangles overlap iff a boundary point of one lies in the other.
/// Sampling makes this blind only to slivers thinner than the spacing.
inline bool boxes_overlap_sampled(const OrientedBox & a, const OrientedBox & b, int per_edge = 2500)
{
  const auto inside = [](const std::vector<Vec2> & pts, const OrientedBox & box) {
    return std::any_of(pts.begin(), pts.end(), [&](const Vec2 & p) { return box.contains(p); });
  };
  return inside(perimeter_points(a, per_edge), b) || inside(perimeter_points(b, per_edge), a);
}

inline OrientedBox grown(const OrientedBox & b, double margin)
{
  return OrientedBox(b.center, b.length + 2.0 * margin, b.width + 2.0 * margin);
}

inline OrientedBox random_box(Rng & rng)
{
  return OrientedBox(
    Pose2D(rng.uniform(0.0, 8.0), rng.uniform(0.0, 8.0), rng.uniform(-3.14159, 3.14159)),
    rng.uniform(0.5, 6.0), rng.uniform(0.5, 3.0));
}

/// Plain scan of every candidate: the feasible minimum in selection order,
/// else the zero-offset full stop.
inline std::size_t exhaustive_choice(const std::vector<CandidateEval> & evals)
{
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (!evals[i].feasible()) {
      continue;
    }
    const auto & a = evals[i];
    if (!best) {
      best = i;
      continue;
    }
    const auto & b = evals[*best];
    const bool better =
      a.cost < b.cost ||
      (a.cost == b.cost && (std::abs(a.delta) < std::abs(b.delta) ||
                            (std::abs(a.delta) == std::abs(b.delta) && a.progress > b.progress)));
    if (better) {
      best = i;
    }
  }
  if (best) {
    return *best;
  }
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (evals[i].delta == 0.0 && evals[i].profile == kFullStopProfile) {
      return i;
    }
  }
  return evals.size();
}

/// Random three-lane scene: traffic around the ego, sometimes a cone or a
/// parked car ahead and sometimes a pedestrian crossing.
inline Observation random_observation(Rng & rng)
{
  static const auto graph = std::make_shared<const LaneGraph>(
    build_base_map(MapKind::StraightMultilane, 3, 3.5, 400.0, 13.4));
  ScenarioSpec spec = make_base_scenario(
    "random", ScenarioType::Nudge, graph, "L1", rng.uniform(40.0, 120.0), rng.uniform(0.0, 13.0), 0);
  const double ego_s = ego_lane_s(spec);
  const int n_agents = static_cast<int>(rng.uniform(0.0, 7.0));
  std::vector<AgentState> agents;
  for (int i = 0; i < n_agents; ++i) {
    const LaneId lane = "L" + std::to_string(static_cast<int>(rng.uniform(0.0, 3.0)));
    const double s = std::max(5.0, ego_s + rng.uniform(-50.0, 70.0));
    AgentState a = make_agent(*graph, i, lane, s, rng.uniform(0.0, 15.0), AgentPolicy::Conservative, {});
    if (!boxes_collide(a.box, spec.ego_box())) {
      agents.push_back(a);
    }
  }
  if (rng.bernoulli(0.5)) {
    const Polyline & line = graph->lane("L1").centerline;
    const double s = ego_s + rng.uniform(12.0, 50.0);
    const bool cone = rng.bernoulli(0.5);
    const Pose2D p = frenet_to_cartesian({s, rng.uniform(-1.5, 1.5)}, line);
    ObstacleSpec o;
    o.kind = cone ? ObstacleKind::Cone : ObstacleKind::ParkedVehicle;
    o.box = cone ? OrientedBox(p, 0.5, 0.5) : OrientedBox(p, kCarLength, kCarWidth);
    o.lane = "L1";
    spec.obstacles.push_back(o);
  }
  std::vector<PedestrianState> peds;
  if (rng.bernoulli(0.3)) {
    const double x = ego_s + rng.uniform(10.0, 40.0);
    PedestrianState p = make_pedestrian(0, Polyline({{x, -6.0}, {x, 6.0}}), 1.5, 30.0);
    p.phase = PedestrianPhase::Crossing;
    p.progress = rng.uniform(0.0, 10.0);
    p.position = p.path.point_at(p.progress);
    peds.push_back(p);
  }
  EgoState ego;
  ego.box = spec.ego_box();
  ego.speed = spec.ego.speed;
  return build_observation(spec, ego, agents, peds, 0.0);
}

}  // namespace longtail::oracle

#endif  // LONGTAIL_TESTS__ORACLES_HPP_
