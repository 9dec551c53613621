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
#include <memory>

#include "longtail/agents.hpp"
#include "longtail/behaviors.hpp"
#include "longtail/hybrid_planner.hpp"
#include "longtail/idm_planner.hpp"
#include "longtail/sampling_planner.hpp"
#include "longtail/simulation.hpp"
#include "longtail/waypoints_planner.hpp"
#include "support/oracles.hpp"

using namespace longtail;

namespace
{

std::shared_ptr<const LaneGraph> straight(int lanes, double length = 400.0)
{
  return std::make_shared<const LaneGraph>(build_base_map(MapKind::StraightMultilane, lanes, 3.5, length, 13.4));
}

ScenarioSpec scene(std::shared_ptr<const LaneGraph> g, const LaneId & lane, double s, double v)
{
  return make_base_scenario("p", ScenarioType::Nudge, std::move(g), lane, s, v, 0);
}

Observation observe(const ScenarioSpec & spec, double time = 0.0)
{
  EgoState ego;
  ego.box = spec.ego_box();
  ego.speed = spec.ego.speed;
  return build_observation(spec, ego, spec.agents, spec.pedestrians, time);
}

AgentState car(const ScenarioSpec & spec, int id, const LaneId & lane, double s, double v)
{
  return make_agent(*spec.graph, id, lane, s, v, AgentPolicy::Conservative, {});
}

double lane_y(const LaneId & lane) { return 3.5 * (lane.back() - '0'); }

class CountingSelector : public BehaviorSelector
{
public:
  explicit CountingSelector(std::optional<BehaviorLabel> answer) : answer_(answer) {}
  SelectorResponse select(const Observation &, const std::vector<BehaviorOption> &) override
  {
    ++calls;
    if (!answer_) {
      throw NoLabelFound("garbage");
    }
    return {*answer_, ""};
  }
  int calls{0};

private:
  std::optional<BehaviorLabel> answer_;
};

}  // namespace

TEST_CASE("idm planner follows the centerline at the limit")
{
  const auto spec = scene(straight(1), "L0", 50.0, 13.4);
  IdmPlanner planner;
  const Trajectory t = planner.plan(observe(spec));
  REQUIRE(t.is_valid());
  CHECK(t.samples.size() == static_cast<std::size_t>(kTrajectorySamples));
  for (const auto & s : t.samples) {
    CHECK(std::abs(s.pose.y) < 1e-9);
    CHECK(s.speed == doctest::Approx(13.4));
  }
}

TEST_CASE("rule-based planners are deterministic and fall back on failure")
{
  const auto suite = generate_benchmark_suite(3);
  for (const auto & spec : {suite[0], suite[35], suite[60]}) {
    const Observation obs = observe(spec);
    IdmPlanner idm;
    IdmMobilPlanner mobil;
    SamplingPlanner sampling;
    for (Planner * p : std::initializer_list<Planner *>{&idm, &mobil, &sampling}) {
      const Trajectory a = p->plan(obs);
      const Trajectory b = p->plan(obs);
      CHECK(a == b);
      CHECK(a.is_valid());
      p->force_failure(true);
      CHECK(p->plan(obs) == brake_trajectory(obs));
      CHECK(p->fallback_count() == 1);
      p->force_failure(false);
    }
  }
}

TEST_CASE("idm planner keeps its lane on a lane-change route")
{
  auto spec = scene(straight(4), "L0", 50.0, 13.4);
  spec = augment_goal_for_lane_changes(spec, 3);
  const Trajectory t = idm_planner_plan(observe(spec));
  for (const auto & s : t.samples) {
    CHECK(std::abs(s.pose.y) < 1e-9);
  }
}

TEST_CASE("mobil decisions")
{
  SUBCASE("symmetric neighbors")
  {
    auto spec = scene(straight(3), "L1", 50.0, 10.0);
    spec.agents = {car(spec, 0, "L0", 80.0, 5.0), car(spec, 1, "L1", 80.0, 5.0), car(spec, 2, "L2", 80.0, 5.0)};
    CHECK_FALSE(mobil_decide(observe(spec)));
  }
  SUBCASE("stopped lead, empty left lane")
  {
    auto spec = scene(straight(2), "L0", 50.0, 10.0);
    // 20 m bumper gap to a stopped car.
    spec.agents = {car(spec, 0, "L0", 50.0 + kCarLength + 20.0, 0.0)};
    CHECK(mobil_decide(observe(spec)) == LaneId("L1"));
    const Trajectory t = idm_mobil_plan(observe(spec));
    CHECK(std::abs(t.samples.back().pose.y - 3.5) < 0.2);
  }
  SUBCASE("safety veto")
  {
    auto spec = scene(straight(2), "L0", 50.0, 10.0);
    // A fast follower just behind in the target lane would need > 4 m/s^2.
    spec.agents = {car(spec, 0, "L0", 50.0 + kCarLength + 20.0, 0.0), car(spec, 1, "L1", 50.0 - kCarLength - 4.0, 13.0)};
    CHECK(idm_acceleration(13.0, 10.0, 4.0, IdmParams::for_speed_limit(13.4)) < -4.0);
    CHECK_FALSE(mobil_decide(observe(spec)));
  }
  SUBCASE("no decision equals the idm planner")
  {
    const auto spec = scene(straight(2), "L0", 50.0, 10.0);
    CHECK(idm_mobil_plan(observe(spec)) == idm_planner_plan(observe(spec)));
  }
  SUBCASE("approval withdrawn on the next tick")
  {
    auto spec = scene(straight(2), "L0", 50.0, 10.0);
    spec.agents = {car(spec, 0, "L0", 50.0 + kCarLength + 20.0, 0.0)};
    CHECK(mobil_decide(observe(spec)) == LaneId("L1"));
    spec.agents.push_back(car(spec, 1, "L1", 50.0 - kCarLength - 4.0, 13.0));
    CHECK_FALSE(mobil_decide(observe(spec, 0.1)));
  }
  SUBCASE("mirror symmetry")
  {
    auto left = scene(straight(3), "L1", 50.0, 10.0);
    left.agents = {car(left, 0, "L1", 75.0, 0.0), car(left, 1, "L0", 80.0, 0.0)};
    auto right = scene(straight(3), "L1", 50.0, 10.0);
    right.agents = {car(right, 0, "L1", 75.0, 0.0), car(right, 1, "L2", 80.0, 0.0)};
    CHECK(mobil_decide(observe(left)) == LaneId("L2"));
    CHECK(mobil_decide(observe(right)) == LaneId("L0"));
  }
}

TEST_CASE("sampling planner choices")
{
  SUBCASE("empty road")
  {
    const auto spec = scene(straight(1), "L0", 50.0, 10.0);
    const auto obs = observe(spec);
    const auto c = select_candidate(obs, follow_lane_option(obs), {});
    CHECK(c.delta == 0.0);
    CHECK(c.profile == kProfileCount - 2);
  }
  SUBCASE("nudge encroaching 40 percent")
  {
    const auto g = std::make_shared<const LaneGraph>(build_base_map(MapKind::TwoWay, 1, 3.5, 400.0, 13.4));
    auto spec = place_parked_vehicle(scene(g, "L0", 40.0, 8.0), ParkedVariant::Nudge, 80.0, 0.4 * 3.5);
    const auto obs = observe(spec);
    const auto c = select_candidate(obs, follow_lane_option(obs), {});
    CHECK((c.delta == 0.5 || c.delta == 1.0));
    CHECK(c.feasible());
  }
  SUBCASE("pedestrian conflict inside and beyond the window")
  {
    const auto conflict_at = [](double seconds) {
      auto spec = scene(straight(1), "L0", 50.0, 10.0);
      const double x = 50.0 + 0.5 * kCarLength + 10.0 * seconds;
      // Reaches the lane center when the ego front would pass at constant speed.
      PedestrianState p = make_pedestrian(0, Polyline({{x, -1.5 * seconds}, {x, 6.0}}), 1.5, 30.0);
      p.phase = PedestrianPhase::Crossing;
      spec.pedestrians = {p};
      const auto obs = observe(spec);
      return select_candidate(obs, follow_lane_option(obs), {});
    };
    const auto near = conflict_at(1.5);
    CHECK(near.profile != kProfileCount - 2);
    CHECK(near.trajectory.at(2.0).speed < 10.0);
    // Beyond the window the conflict is invisible and full speed is kept.
    const auto far = conflict_at(3.5);
    CHECK(far.profile == kProfileCount - 2);
  }
}

TEST_CASE("sampling selection equals the exhaustive argmin")
{
  Rng rng(2024);
  int with_objects = 0;
  for (int i = 0; i < 100; ++i) {
    const Observation obs = oracle::random_observation(rng);
    with_objects += obs.agents.size() + obs.obstacles.size() > 0;
    const BehaviorOption b = follow_lane_option(obs);
    const SamplingConfig cfg;
    const auto all = evaluate_all(obs, b, cfg);
    REQUIRE(all.size() == static_cast<std::size_t>(kCandidateCount));
    const std::size_t want = oracle::exhaustive_choice(all);
    REQUIRE(want < all.size());
    const auto got = select_candidate(obs, b, cfg);
    CHECK(got.offset_index == all[want].offset_index);
    CHECK(got.profile == all[want].profile);
    CHECK(got.trajectory.is_valid());
    if (got.feasible()) {
      CHECK(got.cost == all[want].cost);
    }
  }
  CHECK(with_objects > 50);
}

TEST_CASE("behavior enumeration")
{
  const auto labels = [](const std::vector<BehaviorOption> & opts) {
    std::vector<BehaviorLabel> out;
    for (const auto & o : opts) {
      out.push_back(o.label);
    }
    return out;
  };
  const auto two = scene(straight(2), "L0", 50.0, 10.0);
  CHECK(labels(enumerate_behaviors(observe(two))) ==
        std::vector<BehaviorLabel>{BehaviorLabel::FollowLane, BehaviorLabel::MergeLeft, BehaviorLabel::StopAndWait});
  const auto one = scene(straight(1), "L0", 50.0, 10.0);
  CHECK(labels(enumerate_behaviors(observe(one))) ==
        std::vector<BehaviorLabel>{BehaviorLabel::FollowLane, BehaviorLabel::StopAndWait});

  const auto g = std::make_shared<const LaneGraph>(build_base_map(MapKind::TwoWay, 1, 3.5, 400.0, 13.4));
  const auto blocked = place_parked_vehicle(scene(g, "L0", 40.0, 8.0), ParkedVariant::Overtake, 90.0);
  const auto opts = enumerate_behaviors(observe(blocked));
  const auto * ov = find_option(opts, BehaviorLabel::OvertakeObstacle);
  REQUIRE(ov);
  CHECK(std::abs(ov->lateral_offset) > 3.5 / 2.0);
  REQUIRE(ov->blocking);
  CHECK(ov->blocking->far_s > ov->blocking->near_s);
  CHECK(find_option(opts, BehaviorLabel::FollowLane));
  CHECK(find_option(opts, BehaviorLabel::StopAndWait));
}

TEST_CASE("hybrid planner cadence and fallbacks")
{
  const auto spec = scene(straight(2), "L0", 50.0, 10.0);
  SUBCASE("one query per second")
  {
    auto sel = std::make_shared<CountingSelector>(BehaviorLabel::FollowLane);
    HybridPlanner h(sel);
    for (int k = 0; k < 10; ++k) {
      h.plan(observe(spec, 0.1 * k));
    }
    CHECK(sel->calls == 1);
    for (double dt : {0.1, 0.05, 0.25}) {
      auto s2 = std::make_shared<CountingSelector>(BehaviorLabel::FollowLane);
      HybridPlanner h2(s2);
      for (int k = 0; k * dt < 3.5 - 1e-9; ++k) {
        h2.plan(observe(spec, k * dt));
      }
      CHECK(s2->calls == 4);
    }
  }
  SUBCASE("merge left centers candidates on the left lane")
  {
    HybridPlanner h(std::make_shared<CountingSelector>(BehaviorLabel::MergeLeft));
    const Trajectory t = h.plan(observe(spec));
    CHECK(std::abs(t.samples.back().pose.y - lane_y("L1")) <= 1.0 + 1e-9);
    CHECK(h.current_behavior() == std::string("merge_left"));
  }
  SUBCASE("dwell time holds a fresh label")
  {
    class Toggle : public BehaviorSelector
    {
    public:
      SelectorResponse select(const Observation &, const std::vector<BehaviorOption> &) override
      {
        flip = !flip;
        return {flip ? BehaviorLabel::StopAndWait : BehaviorLabel::FollowLane, ""};
      }
      bool flip{false};
    };
    const auto run = [&](double dwell) {
      HybridPlanner h(std::make_shared<Toggle>(), {}, dwell);
      std::string labels;
      for (int k = 0; k < 60; ++k) {
        h.plan(observe(spec, 0.1 * k));
        if (k % 10 == 0) {
          labels += h.current_behavior()->front();
        }
      }
      return labels;
    };
    CHECK(run(0.0) == "sfsfsf");
    CHECK(run(2.0) == "sssfff");
    CHECK_THROWS(HybridPlanner(std::make_shared<Toggle>(), {}, -1.0));
  }
  SUBCASE("garbage selector behaves like follow-lane sampling")
  {
    HybridPlanner h(std::make_shared<CountingSelector>(std::nullopt));
    SamplingPlanner s;
    for (int k = 0; k < 15; ++k) {
      const auto obs = observe(spec, 0.1 * k);
      CHECK(h.plan(obs) == s.plan(obs));
    }
    CHECK(h.failed_query_count() == 2);
  }
}

TEST_CASE("waypoints planner")
{
  const auto spec = scene(straight(1), "L0", 50.0, 10.0);
  const auto obs = observe(spec);
  SUBCASE("straight line at 10 m/s")
  {
    auto client = std::make_shared<MockChatClient>([](const PromptBundle &) {
      std::string out = "[";
      for (int i = 1; i <= 16; ++i) {
        out += "(" + std::to_string(5.0 * i) + ", 0.0)" + (i < 16 ? ", " : "");
      }
      return out + "]";
    });
    WaypointsPlanner p(client);
    const Trajectory t = p.plan(obs);
    REQUIRE(t.is_valid());
    CHECK(t.samples.back().pose.x - t.samples.front().pose.x == doctest::Approx(80.0).epsilon(1e-3));
    CHECK(p.fallback_count() == 0);
  }
  SUBCASE("reasoning before coordinates")
  {
    auto client = std::make_shared<MockChatClient>([](const PromptBundle &) {
      std::string out = "The road ahead is clear, so I keep my lane at a steady 8 m/s.\n\nTrajectory:\n";
      for (int i = 1; i <= 16; ++i) {
        out += "(" + std::to_string(4.0 * i) + ", 0.0)\n";
      }
      return out;
    });
    WaypointsPlanner p(client);
    CHECK(p.plan(obs).is_valid());
    CHECK(p.fallback_count() == 0);
    REQUIRE(p.exchanges().size() == 1);
  }
  SUBCASE("empty response brakes")
  {
    WaypointsPlanner p(std::make_shared<MockChatClient>([](const PromptBundle &) { return std::string(); }));
    CHECK(p.plan(obs) == brake_trajectory(obs));
    CHECK(p.fallback_count() == 1);
  }
}
