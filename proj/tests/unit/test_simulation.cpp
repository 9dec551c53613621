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
#include <filesystem>
#include <limits>
#include <memory>
#include <numbers>

#include "longtail/idm_planner.hpp"
#include "longtail/simulation.hpp"
#include "longtail/trace_io.hpp"

using namespace longtail;

namespace
{

EgoState ego_at(double x, double y, double heading, double speed)
{
  EgoState e;
  e.box = OrientedBox(Pose2D(x, y, heading), kCarLength, kCarWidth);
  e.speed = speed;
  return e;
}

Trajectory straight_reference(double x0, double speed)
{
  Trajectory t;
  for (int k = 0; k < kTrajectorySamples; ++k) {
    const double time = k * kTrajectoryStep;
    t.samples.push_back({time, Pose2D(x0 + speed * time, 0.0, 0.0), speed});
  }
  return t;
}

Vec2 integrate(double dt, double duration)
{
  SimConfig cfg;
  EgoState s = ego_at(0.0, 0.0, 0.0, 5.0);
  const int steps = static_cast<int>(std::lround(duration / dt));
  for (int k = 0; k < steps; ++k) {
    s = kinematic_bicycle_step(s, 0.2, 0.5, cfg, dt);
  }
  return s.box.center.position();
}

ScenarioSpec straight_scene(double v)
{
  auto g = std::make_shared<const LaneGraph>(build_base_map(MapKind::StraightMultilane, 1, 3.5, 400.0, 13.4));
  return make_base_scenario("s", ScenarioType::Construction, g, "L0", 50.0, v, 7);
}

}  // namespace

TEST_CASE("kinematic bicycle")
{
  SimConfig cfg;
  SUBCASE("straight line")
  {
    EgoState s = ego_at(0.0, 0.0, 0.0, 10.0);
    for (int k = 0; k < 50; ++k) {
      s = kinematic_bicycle_step(s, 0.0, 0.0, cfg, 0.1);
    }
    CHECK(s.box.center.x == doctest::Approx(50.0));
    CHECK(s.box.center.y == 0.0);
    CHECK(s.speed == 10.0);
  }
  SUBCASE("turning radius")
  {
    const double steer = 0.3;
    const double radius = cfg.wheelbase / std::tan(steer);
    const double v = 2.0;
    const double dt = 0.01;
    EgoState s = ego_at(0.0, 0.0, 0.0, v);
    const int steps = static_cast<int>(2.0 * std::numbers::pi * radius / (v * dt));
    double worst = 0.0;
    for (int k = 0; k < steps; ++k) {
      s = kinematic_bicycle_step(s, steer, 0.0, cfg, dt);
      const double r = std::hypot(s.box.center.x, s.box.center.y - radius);
      worst = std::max(worst, std::abs(r - radius) / radius);
    }
    CHECK(worst < 0.01);
  }
  SUBCASE("first-order convergence")
  {
    const Vec2 a = integrate(0.1, 4.0);
    const Vec2 b = integrate(0.05, 4.0);
    const Vec2 c = integrate(0.025, 4.0);
    const double ratio = (a - b).norm() / (b - c).norm();
    CHECK(ratio >= 1.8);
    CHECK(ratio <= 2.2);
  }
  SUBCASE("command clamps")
  {
    EgoState s = ego_at(0.0, 0.0, 0.0, 0.5);
    s = kinematic_bicycle_step(s, 2.0, -20.0, cfg, 0.1);
    CHECK(s.steering == kMaxSteering);
    CHECK(s.speed == 0.0);
  }
}

TEST_CASE("trajectory tracking")
{
  SimConfig cfg;
  SUBCASE("on the reference")
  {
    const auto c = track_trajectory(straight_reference(0.0, 10.0), ego_at(0.0, 0.0, 0.0, 10.0), cfg);
    CHECK(std::abs(c.steer) < 1e-3);
    CHECK(std::abs(c.accel) < 1e-3);
  }
  SUBCASE("left of the reference steers right")
  {
    const auto c = track_trajectory(straight_reference(0.0, 10.0), ego_at(0.0, 0.5, 0.0, 10.0), cfg);
    CHECK(c.steer < 0.0);
  }
  SUBCASE("settled cross-track error")
  {
    EgoState ego = ego_at(0.0, 0.5, 0.0, 10.0);
    for (int k = 0; k < 100; ++k) {
      const auto c = track_trajectory(straight_reference(ego.box.center.x, 10.0), ego, cfg);
      ego = kinematic_bicycle_step(ego, c.steer, c.accel, cfg, cfg.dt);
    }
    CHECK(std::abs(ego.box.center.y) < 0.1);
    CHECK(ego.speed == doctest::Approx(10.0).epsilon(0.01));
  }
  SUBCASE("degenerate reference brakes")
  {
    Trajectory t;
    for (int k = 0; k < kTrajectorySamples; ++k) {
      t.samples.push_back({k * kTrajectoryStep, Pose2D(3.0, 0.0, 0.0), 0.0});
    }
    CHECK(track_trajectory(t, ego_at(0.0, 0.0, 0.0, 5.0), cfg).accel < 0.0);
  }
}

TEST_CASE("observation building")
{
  auto spec = straight_scene(10.0);
  spec.agents = {make_agent(*spec.graph, 0, "L0", 50.0 + 150.0, 5.0, AgentPolicy::Conservative, {}),
                 make_agent(*spec.graph, 1, "L0", 50.0 + 40.0, 5.0, AgentPolicy::Conservative, {})};
  EgoState ego;
  ego.box = spec.ego_box();
  ego.speed = 10.0;
  const Observation obs = build_observation(spec, ego, spec.agents, {}, 2.3);
  REQUIRE(obs.agents.size() == 1);
  CHECK(obs.agents[0].id == 1);
  CHECK(obs.time == 2.3);
  CHECK(build_observation(spec, ego, spec.agents, {}, 2.3) == obs);
}

TEST_CASE("closed loop")
{
  SUBCASE("snapshot count")
  {
    IdmPlanner p;
    const auto trace = run_closed_loop(straight_scene(10.0), p);
    CHECK(trace.snapshots.size() == 151);
    for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
      CHECK(trace.snapshots[k].time == doctest::Approx(0.1 * k).epsilon(1e-12));
    }
  }
  SUBCASE("idm stops before a construction zone")
  {
    const auto spec = place_construction_zone(straight_scene(10.0), 120.0, 20.0);
    IdmPlanner p;
    const auto trace = run_closed_loop(spec, p);
    const auto & ego = trace.snapshots.back().ego;
    CHECK(ego.speed < 0.1);
    double first = std::numeric_limits<double>::infinity();
    for (const auto & o : spec.obstacles) {
      for (const auto & c : o.box.corners()) {
        first = std::min(first, c.x);
      }
    }
    const double front = ego.box.center.x + 0.5 * kCarLength;
    CHECK(first - front >= IdmParams{}.min_gap - 0.5);
    for (const auto & e : trace.events) {
      CHECK(e.kind != EventKind::Collision);
    }
  }
  SUBCASE("suite scenarios replay identically")
  {
    const auto suite = generate_benchmark_suite(42);
    for (const std::size_t i : {0u, 25u, 47u, 79u}) {
      IdmPlanner a;
      IdmPlanner b;
      const auto ta = run_closed_loop(suite[i], a);
      const auto tb = run_closed_loop(suite[i], b);
      CHECK(ta == tb);
      CHECK(trace_hash(ta) == trace_hash(tb));
      for (const auto & s : ta.snapshots) {
        CHECK(s.ego.speed >= 0.0);
        CHECK(std::abs(s.ego.steering) <= kMaxSteering);
      }
      // Logged collisions agree with an offline re-check of the boxes.
      for (const auto & e : ta.events) {
        if (e.kind != EventKind::Collision || e.first != ActorKind::Ego) {
          continue;
        }
        const auto & snap = ta.snapshots[e.tick];
        const auto contacts = detect_contacts(suite[i], snap);
        bool found = false;
        for (const auto & c : contacts) {
          found = found || (c.second == e.second && c.second_index == e.second_index);
        }
        CHECK(found);
      }
    }
  }
}

TEST_CASE("trace serialization")
{
  const auto suite = generate_benchmark_suite(42);
  IdmPlanner p;
  const auto trace = run_closed_loop(suite[30], p);
  CHECK(parse_trace(dump_trace(trace)) == trace);
  CHECK(trace_from_cbor(trace_to_cbor(trace)) == trace);
  CHECK(hash_hex(trace_hash(trace)).size() == 16);
  const auto path = std::filesystem::temp_directory_path() / "longtail_trace_test.json";
  save_trace(trace, path);
  CHECK(load_trace(path) == trace);
  std::filesystem::remove(path);
  CHECK_THROWS(parse_trace("{\"version\": 1"));
}
