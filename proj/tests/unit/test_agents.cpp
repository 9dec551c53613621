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

#include <doctest.h>

#include <cmath>

#include "longtail/agents.hpp"
#include "longtail/scenario.hpp"

using namespace longtail;

namespace
{

IdmParams params(double v0 = 13.4)
{
  IdmParams p;
  p.desired_speed = v0;
  return p;
}

const LaneGraph & long_map()
{
  static const LaneGraph g = build_base_map(MapKind::StraightMultilane, 2, 3.5, 1200.0, 15.0);
  return g;
}

}  // namespace

TEST_CASE("idm acceleration closed form")
{
  const IdmParams p = params(15.0);
  CHECK(idm_acceleration(15.0, std::nullopt, std::nullopt, p) == 0.0);
  CHECK(idm_acceleration(0.0, 0.0, p.min_gap, p) == doctest::Approx(0.0));
  CHECK(idm_acceleration(15.0, 15.0, p.min_gap + 15.0 * p.time_headway, p) == doctest::Approx(-p.max_accel));
  CHECK(idm_acceleration(0.0, std::nullopt, std::nullopt, p) == doctest::Approx(p.max_accel));
  CHECK(idm_acceleration(15.0, 0.0, 0.5, p) == -kEmergencyDecel);
  CHECK_THROWS_AS(idm_acceleration(5.0, 0.0, 0.0, p), std::invalid_argument);
  CHECK_THROWS_AS(idm_acceleration(5.0, 0.0, -1.0, p), std::invalid_argument);

  // Monotone: decreasing in speed, increasing in gap.
  double prev = idm_acceleration(0.0, 5.0, 20.0, p);
  for (double v = 0.5; v <= 15.0; v += 0.5) {
    const double a = idm_acceleration(v, 5.0, 20.0, p);
    CHECK(a <= prev + 1e-12);
    prev = a;
  }
  prev = idm_acceleration(8.0, 5.0, 1.0, p);
  for (double gap = 2.0; gap <= 100.0; gap += 1.0) {
    const double a = idm_acceleration(8.0, 5.0, gap, p);
    CHECK(a >= prev - 1e-12);
    prev = a;
  }
}

TEST_CASE("idm parameter validation")
{
  IdmParams p;
  CHECK_NOTHROW(p.validate());
  p.time_headway = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("lead selection and the ego")
{
  const LaneGraph & g = long_map();
  const AgentState agent = make_agent(g, 0, "L0", 100.0, 10.0, AgentPolicy::Conservative, params());
  // Ego 20 m ahead, straddling the L0/L1 boundary with its center in L1.
  const OrientedBox straddling(Pose2D(120.0, 2.0, 0.0), kCarLength, kCarWidth);
  const auto lead = select_lead(agent, g, {}, {}, {}, straddling, 8.0);
  REQUIRE(lead);
  CHECK(lead->gap == doctest::Approx(20.0 - kCarLength));
  CHECK(lead->speed == doctest::Approx(8.0));

  AgentState assertive = agent;
  assertive.policy = AgentPolicy::Assertive;
  CHECK_FALSE(select_lead(assertive, g, {}, {}, {}, straddling, 8.0));
  // Fully merged: within a quarter lane width of the centerline.
  const OrientedBox merged(Pose2D(120.0, 0.5, 0.0), kCarLength, kCarWidth);
  CHECK(select_lead(assertive, g, {}, {}, {}, merged, 8.0));

  const OrientedBox far_away(Pose2D(120.0, 50.0, 0.0), kCarLength, kCarWidth);
  CHECK_FALSE(select_lead(agent, g, {}, {}, {}, far_away, 8.0));

  SUBCASE("obstacles and pedestrians always count")
  {
    ObstacleSpec cone{ObstacleKind::Cone, OrientedBox(Pose2D(140.0, 0.0, 0.0), 0.5, 0.5), "L0"};
    const std::vector<ObstacleSpec> obstacles{cone};
    const auto l = select_lead(assertive, g, {}, {}, obstacles, far_away, 0.0);
    REQUIRE(l);
    CHECK(l->speed == 0.0);
    CHECK(l->gap == doctest::Approx(40.0 - 0.25 - 0.5 * kCarLength));

    PedestrianState ped = make_pedestrian(0, Polyline({{130.0, -5.0}, {130.0, 5.0}}), 1.5, 30.0);
    ped.phase = PedestrianPhase::Crossing;
    ped.progress = 5.0;
    ped.position = ped.path.point_at(5.0);
    const std::vector<PedestrianState> peds{ped};
    const auto lp = select_lead(assertive, g, {}, peds, {}, far_away, 0.0);
    REQUIRE(lp);
    CHECK(lp->gap == doctest::Approx(30.0 - 0.3 - 0.5 * kCarLength));
  }
}

TEST_CASE("vehicle agent stepping")
{
  const LaneGraph & g = long_map();
  const IdmParams p = params(15.0);
  const AgentState free = make_agent(g, 0, "L0", 100.0, 15.0, AgentPolicy::Conservative, p);
  const AgentState next = step_vehicle_agent(free, std::nullopt, g, 0.1);
  CHECK(next.s == doctest::Approx(101.5));
  CHECK(next.speed == doctest::Approx(15.0));
  CHECK(next.lane == "L0");

  const AgentState stopped = make_agent(g, 1, "L0", 100.0, 0.0, AgentPolicy::Conservative, p);
  const AgentState held = step_vehicle_agent(stopped, Lead{0.0, p.min_gap}, g, 0.1);
  CHECK(held.speed == doctest::Approx(0.0).epsilon(1e-12));

  SUBCASE("steady following gap")
  {
    AgentState lead = make_agent(g, 0, "L0", 60.0, 5.0, AgentPolicy::Conservative, params(5.0));
    AgentState follower = make_agent(g, 1, "L0", 20.0, 5.0, AgentPolicy::Conservative, p);
    for (int k = 0; k < 600; ++k) {
      const Lead l{lead.speed, lead.s - follower.s - 0.5 * (lead.length + follower.length)};
      follower = step_vehicle_agent(follower, l, g, 0.1);
      lead = step_vehicle_agent(lead, std::nullopt, g, 0.1);
    }
    const double gap = lead.s - follower.s - kCarLength;
    CHECK(gap == doctest::Approx(p.min_gap + 5.0 * p.time_headway).epsilon(0.01));
    CHECK(follower.speed == doctest::Approx(5.0).epsilon(0.01));
  }
  SUBCASE("running off the map deactivates")
  {
    AgentState a = make_agent(g, 0, "L0", 1199.0, 15.0, AgentPolicy::Conservative, p);
    a = step_vehicle_agent(a, std::nullopt, g, 0.1);
    CHECK_FALSE(a.active);
  }
}

TEST_CASE("conservative platoons never collide")
{
  const LaneGraph & g = long_map();
  const IdmParams p = params(15.0);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    const double gap = rng.uniform(TrafficDensity::kMinGap, 100.0);
    AgentState lead = make_agent(g, 0, "L0", 200.0, rng.uniform(0.0, 15.0), AgentPolicy::Conservative, p);
    AgentState follower = make_agent(g, 1, "L0", 200.0 - gap - kCarLength, 0.0, AgentPolicy::Conservative, p);
    follower.speed = std::min(15.0, idm_equilibrium_speed(gap, p));
    const std::vector<ObstacleSpec> cone{
      {ObstacleKind::Cone, OrientedBox(Pose2D(rng.uniform(230.0, 400.0), 0.0, 0.0), 0.5, 0.5), "L0"}};
    const OrientedBox ego(Pose2D(0.0, 50.0, 0.0), kCarLength, kCarWidth);
    bool collided = false;
    for (int k = 0; k < 300 && !collided; ++k) {
      const std::vector<AgentState> all{lead, follower};
      const LaneOccupancy occ(g, all, {}, cone, ego, 0.0);
      const auto ll = select_lead(lead, g, occ);
      const auto lf = select_lead(follower, g, occ);
      lead = step_vehicle_agent(lead, ll, g, 0.1);
      follower = step_vehicle_agent(follower, lf, g, 0.1);
      collided = boxes_collide(lead.box, follower.box) || boxes_collide(lead.box, cone[0].box);
    }
    CHECK_MESSAGE(!collided, "seed " << seed);
  }
}

TEST_CASE("pedestrian trigger and crossing")
{
  PedestrianState ped = make_pedestrian(0, Polyline({{100.0, -3.5}, {100.0, 3.5}}), 1.5, 30.0);
  ped = step_pedestrian(ped, Pose2D(50.0, 0.0, 0.0), 10.0, 0.1);
  CHECK(ped.phase == PedestrianPhase::Waiting);
  // Standing still does not trigger.
  CHECK(step_pedestrian(ped, Pose2D(75.0, 0.0, 0.0), 0.0, 0.1).phase == PedestrianPhase::Waiting);
  ped = step_pedestrian(ped, Pose2D(71.0, 0.0, 0.0), 10.0, 0.1);
  CHECK(ped.phase == PedestrianPhase::Crossing);
  double t = 0.0;
  while (ped.phase == PedestrianPhase::Crossing && t < 10.0) {
    const auto before = ped.phase;
    ped = step_pedestrian(ped, Pose2D(0.0, 0.0, 0.0), 10.0, 0.1);
    CHECK((ped.phase == before || ped.phase == PedestrianPhase::Done));
    t += 0.1;
  }
  CHECK(ped.phase == PedestrianPhase::Done);
  CHECK(t <= 7.0 / 1.5 + 0.1 + 1e-9);
  CHECK(ped.position == Vec2{100.0, 3.5});
  CHECK(step_pedestrian(ped, Pose2D(71.0, 0.0, 0.0), 10.0, 0.1).phase == PedestrianPhase::Done);
}
