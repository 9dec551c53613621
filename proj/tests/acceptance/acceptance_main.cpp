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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "longtail/agents.hpp"
#include "longtail/bench.hpp"
#include "longtail/metrics.hpp"
#include "longtail/sampling_planner.hpp"
#include "longtail/simulation.hpp"
#include "support/oracles.hpp"

using namespace longtail;
namespace fs = std::filesystem;

namespace
{

struct Verdict
{
  bool pass{false};
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char * f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string & name)
{
  const fs::path p = fs::temp_directory_path() / ("longtail_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

// Full-suite runs shared by several criteria.
struct SuiteRun
{
  BenchmarkResult serial;
  BenchmarkResult parallel;
  bool csv_identical{false};
  bool hashes_identical{false};
  double serial_seconds{0.0};
};

std::map<std::string, SuiteRun> g_runs;

const SuiteRun & suite_run(const PlannerSpec & planner)
{
  const std::string key = planner.label();
  if (auto it = g_runs.find(key); it != g_runs.end()) {
    return it->second;
  }
  SuiteRun run;
  RunConfig cfg;
  cfg.planner = planner;
  cfg.master_seed = 42;
  cfg.jobs = 1;
  cfg.out = scratch(planner.name + "_serial");
  const auto start = Clock::now();
  run.serial = run_benchmark(cfg);
  run.serial_seconds = seconds_since(start);
  RunConfig par = cfg;
  par.jobs = 8;
  par.out = scratch(planner.name + "_parallel");
  run.parallel = run_benchmark(par);
  run.csv_identical = slurp(cfg.out / "scores.csv") == slurp(par.out / "scores.csv");
  run.hashes_identical = slurp(cfg.out / "hashes.txt") == slurp(par.out / "hashes.txt");
  fs::remove_all(cfg.out);
  fs::remove_all(par.out);
  return g_runs.emplace(key, std::move(run)).first->second;
}

const ScenarioResult * find_result(const BenchmarkResult & r, const std::string & name)
{
  for (const auto & s : r.results) {
    if (s.score.scenario == name) {
      return &s;
    }
  }
  return nullptr;
}

double type_mean(const BenchmarkResult & r, ScenarioType type)
{
  double sum = 0.0;
  int n = 0;
  for (const auto & s : r.results) {
    if (s.score.type == type) {
      sum += s.score.score;
      ++n;
    }
  }
  return n > 0 ? sum / n : 0.0;
}

Verdict criterion_1()
{
  const auto start = Clock::now();
  const auto suite = generate_benchmark_suite(42);
  const double elapsed = seconds_since(start);
  std::map<ScenarioType, int> per_type;
  for (const auto & s : suite) {
    ++per_type[s.type];
  }
  bool ok = suite.size() == 80 && elapsed < 5.0;
  for (auto t : kAllScenarioTypes) {
    ok = ok && per_type[t] == 10;
  }
  std::string splits;
  for (auto type : {ScenarioType::LaneChangeLTD, ScenarioType::LaneChangeMTD, ScenarioType::LaneChangeHTD}) {
    int conservative = 0;
    int assertive = 0;
    int mixed = 0;
    for (const auto & spec : suite) {
      if (spec.type != type) {
        continue;
      }
      const long n = std::count_if(spec.agents.begin(), spec.agents.end(),
                                   [](const AgentState & a) { return a.policy == AgentPolicy::Assertive; });
      if (n == 0) {
        ++conservative;
      } else if (n == static_cast<long>(spec.agents.size())) {
        ++assertive;
      } else {
        ++mixed;
      }
    }
    ok = ok && conservative == 3 && assertive == 3 && mixed == 4;
    splits += " " + std::string(to_string(type)) + "=" + std::to_string(conservative) + "/" +
              std::to_string(assertive) + "/" + std::to_string(mixed);
  }
  return {ok, std::to_string(suite.size()) + " scenarios, 10 per type, conservative/assertive/mixed" + splits +
                ", generated in " + fmt("%.3f", elapsed) + " s"};
}

Verdict criterion_2()
{
  RunConfig cfg;
  cfg.planner = {"idm", {}};
  cfg.types = {ScenarioType::Construction, ScenarioType::Accident, ScenarioType::Overtake};
  cfg.out = scratch("idm_obstacles");
  const auto start = Clock::now();
  const auto r = run_benchmark(cfg);
  const double elapsed = seconds_since(start);
  fs::remove_all(cfg.out);
  int zero = 0;
  int stuck = 0;
  for (const auto & s : r.results) {
    zero += s.score.score == 0.0;
    stuck += s.score.multipliers.min_progress == 0.0;
  }
  const bool ok = r.results.size() == 30 && zero == 30 && stuck == 30 && elapsed < 60.0;
  return {ok, std::to_string(zero) + "/" + std::to_string(r.results.size()) + " scored 0, " + std::to_string(stuck) +
                " gated by min_progress, " + fmt("%.2f", elapsed) + " s"};
}

Verdict criterion_3()
{
  const auto & idm = suite_run({"idm", {}}).serial.report;
  const auto & mobil = suite_run({"idm_mobil", {}}).serial.report;
  const double goal = idm.goal.value_or(-1.0);
  const double nocol = idm.no_collision.value_or(-1.0);
  const double mgoal = mobil.goal.value_or(-1.0);
  const bool ok = goal == 0.0 && nocol == 1.0 && mgoal > 0.0;
  return {ok, "IDM Goal " + fmt("%.1f", 100.0 * goal) + ", No-Col. " + fmt("%.1f", 100.0 * nocol) +
                "; IDM+MOBIL Goal " + fmt("%.1f", 100.0 * mgoal)};
}

Verdict criterion_4()
{
  const auto & r = suite_run({"sampling", {}}).serial;
  int passed = 0;
  int total = 0;
  for (const auto & s : r.results) {
    if (s.score.type == ScenarioType::Nudge) {
      ++total;
      passed += s.score.multipliers.min_progress == 1.0;
    }
  }
  return {total == 10 && passed >= 7, std::to_string(passed) + "/" + std::to_string(total) + " Nudge scenarios passed"};
}

struct JaywalkerOutcome
{
  double brake_onset{-1.0};
  double final_speed{0.0};
  double final_gap{0.0};
  int collisions{0};
};

// A pedestrian steps out when the ego is 2.5 s away and stops on the lane
// center. The lane entry happens 2 s after the trigger.
JaywalkerOutcome run_jaywalker(double window)
{
  const double v = 13.4;
  auto g = std::make_shared<const LaneGraph>(build_base_map(MapKind::StraightMultilane, 1, 3.5, 400.0, 13.4));
  auto spec = make_base_scenario("jaywalker_ab", ScenarioType::Jaywalker, g, "L0", 50.0, v, 1);
  const double x = 150.0;
  const double trigger = 2.5 * v + 0.5 * kCarLength + 0.5 * kPedestrianSize;
  spec.pedestrians.push_back(make_pedestrian(0, Polyline({{x, -4.5}, {x, 0.0}}), 1.5, trigger));
  SamplingConfig cfg;
  cfg.eval_window = window;
  SamplingPlanner planner(cfg);
  const SimTrace trace = run_closed_loop(spec, planner);
  JaywalkerOutcome out;
  for (const auto & s : trace.snapshots) {
    if (out.brake_onset < 0.0 && s.ego.accel < -1.0) {
      out.brake_onset = s.time;
    }
  }
  for (const auto & e : trace.events) {
    out.collisions += e.kind == EventKind::Collision;
  }
  const auto & last = trace.snapshots.back();
  out.final_speed = last.ego.speed;
  out.final_gap = last.pedestrians[0].position.x - 0.5 * kPedestrianSize - last.ego.box.center.x - 0.5 * kCarLength;
  return out;
}

Verdict criterion_5()
{
  const auto w2 = run_jaywalker(2.0);
  const auto w4 = run_jaywalker(4.0);
  const bool late = w2.brake_onset < 0.0 || w2.brake_onset - w4.brake_onset >= 0.3;
  const bool w2_fails = w2.collisions > 0 || late;
  const bool w4_ok = w4.collisions == 0 && w4.final_speed < 0.1 && w4.brake_onset >= 0.0;
  return {w2_fails && w4_ok,
          "W=2: onset " + fmt("%.1f", w2.brake_onset) + " s, collisions " + std::to_string(w2.collisions) +
            ", final gap " + fmt("%.2f", w2.final_gap) + " m; W=4: onset " + fmt("%.1f", w4.brake_onset) +
            " s, collisions " + std::to_string(w4.collisions) + ", stopped at " + fmt("%.2f", w4.final_speed) +
            " m/s, gap " + fmt("%.2f", w4.final_gap) + " m"};
}

Verdict criterion_6()
{
  const auto & hybrid = suite_run({"hybrid", {{"selector", "oracle"}}}).serial;
  const auto & sampling = suite_run({"sampling", {}}).serial;
  const ScenarioResult * ov = find_result(hybrid, "overtake_00");
  const bool passes = ov && ov->score.multipliers.min_progress == 1.0 && ov->score.multipliers.collision == 1.0 &&
                      ov->score.score > 0.0;
  const double hc = type_mean(hybrid, ScenarioType::Construction);
  const double sc = type_mean(sampling, ScenarioType::Construction);
  const double ha = type_mean(hybrid, ScenarioType::Accident);
  const double sa = type_mean(sampling, ScenarioType::Accident);
  return {passes && hc > sc && ha > sa,
          "overtake_00 score " + fmt("%.3f", ov ? ov->score.score : -1.0) + "; Construction " + fmt("%.3f", hc) +
            " vs " + fmt("%.3f", sc) + "; Accident " + fmt("%.3f", ha) + " vs " + fmt("%.3f", sa)};
}

Verdict criterion_7()
{
  const MetricConfig cfg;
  Rng rng(7);
  bool gate_ok = true;
  for (int i = 0; i < 50; ++i) {
    const ScoreComponents c{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0),
                            rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
    for (int which = 0; which < 5; ++which) {
      ScoreMultipliers m;
      double * fields[] = {&m.collision, &m.drivable, &m.direction, &m.stationary, &m.min_progress};
      *fields[which] = 0.0;
      const auto type = which == 2 ? ScenarioType::LaneChangeLTD : kAllScenarioTypes[i % 8];
      gate_ok = gate_ok && aggregate_score(c, m, cfg, type).score == 0.0;
    }
  }

  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const ScenarioType type = kAllScenarioTypes[i % 8];
    const ScoreComponents c{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0),
                            rng.bernoulli(0.5) ? 1.0 : 0.0, rng.uniform(0.0, 1.0)};
    ScoreMultipliers m;
    m.direction = rng.bernoulli(0.5) ? 0.5 : 1.0;
    const bool lc = is_lane_change(type);
    const double num = 5.0 * c.progress + 5.0 * c.ttc + 4.0 * c.speed_limit + 2.0 * c.comfort +
                       (lc ? 5.0 * c.lane_change : 0.0);
    const double den = lc ? 21.0 : 16.0;
    const bool exempt = type == ScenarioType::Overtake || type == ScenarioType::Accident;
    const double expected = (exempt ? 1.0 : m.direction) * num / den;
    worst = std::max(worst, std::abs(aggregate_score(c, m, cfg, type).score - expected));
  }

  // Exemption on a trace that drives 20 m in the oncoming lane.
  auto g = std::make_shared<const LaneGraph>(build_base_map(MapKind::TwoWay, 1, 3.5, 400.0, 13.4));
  SimTrace trace;
  for (int k = 0; k < 151; ++k) {
    Snapshot s;
    s.tick = k;
    s.time = 0.1 * k;
    const double x = 50.0 + k;
    s.ego.box = OrientedBox(Pose2D(x, x >= 80.0 && x <= 100.0 ? 3.5 : 0.0, 0.0), kCarLength, kCarWidth);
    s.ego.speed = 10.0;
    trace.snapshots.push_back(s);
  }
  bool exempt_ok = true;
  std::string dirs;
  for (auto type : {ScenarioType::Overtake, ScenarioType::Accident, ScenarioType::LaneChangeLTD}) {
    const auto spec = make_base_scenario("dir", type, g, "L0", 50.0, 10.0, 0);
    const double d = driving_direction_metric(trace, spec, type);
    ScoreMultipliers m;
    m.direction = 0.0;
    const double agg = aggregate_score({}, m, cfg, type).score;
    const bool exempt = type != ScenarioType::LaneChangeLTD;
    exempt_ok = exempt_ok && (exempt ? d == 1.0 && agg == 1.0 : d == 0.0 && agg == 0.0);
    dirs += " " + std::string(to_string(type)) + "=" + fmt("%.1f", d);
  }
  return {gate_ok && worst <= 1e-12 && exempt_ok,
          std::string("zero-multiplier gate ") + (gate_ok ? "holds" : "broken") + ", max aggregation error " +
            fmt("%.2e", worst) + " over 20 vectors, direction multiplier" + dirs};
}

Verdict criterion_8()
{
  Rng rng(31337);
  int disagreements = 0;
  int unexplained = 0;
  int overlapping = 0;
  for (int i = 0; i < 10000; ++i) {
    const OrientedBox a = oracle::random_box(rng);
    const OrientedBox b = oracle::random_box(rng);
    const bool sat = boxes_collide(a, b);
    overlapping += sat;
    if (sat != oracle::boxes_overlap_sampled(a, b)) {
      ++disagreements;
      // The sampled oracle is blind to slivers thinner than its spacing.
      const double h = 6.0 / 2500.0;
      unexplained += boxes_collide(oracle::grown(a, -h), oracle::grown(b, -h)) ==
                     boxes_collide(oracle::grown(a, h), oracle::grown(b, h));
    }
  }
  int mismatched = 0;
  for (int i = 0; i < 100; ++i) {
    const Observation obs = oracle::random_observation(rng);
    const BehaviorOption lane = follow_lane_option(obs);
    const SamplingConfig cfg;
    const auto all = evaluate_all(obs, lane, cfg);
    const std::size_t want = oracle::exhaustive_choice(all);
    const auto got = select_candidate(obs, lane, cfg);
    mismatched += all.size() != static_cast<std::size_t>(kCandidateCount) || want >= all.size() ||
                  got.offset_index != all[want].offset_index || got.profile != all[want].profile;
  }
  return {unexplained == 0 && mismatched == 0,
          "boxes: " + std::to_string(10000 - disagreements) + "/10000 agree (" + std::to_string(overlapping) +
            " overlapping), " + std::to_string(disagreements) + " sub-spacing tangencies, " +
            std::to_string(unexplained) + " unexplained; sampling argmin: " + std::to_string(100 - mismatched) +
            "/100 match"};
}

Verdict criterion_9()
{
  // IDM steady following gap.
  const LaneGraph g = build_base_map(MapKind::StraightMultilane, 1, 3.5, 1200.0, 15.0);
  IdmParams p;
  p.desired_speed = 15.0;
  IdmParams lead_p = p;
  lead_p.desired_speed = 5.0;
  AgentState lead = make_agent(g, 0, "L0", 60.0, 5.0, AgentPolicy::Conservative, lead_p);
  AgentState follower = make_agent(g, 1, "L0", 20.0, 5.0, AgentPolicy::Conservative, p);
  for (int k = 0; k < 600; ++k) {
    const Lead l{lead.speed, lead.s - follower.s - 0.5 * (lead.length + follower.length)};
    follower = step_vehicle_agent(follower, l, g, 0.1);
    lead = step_vehicle_agent(lead, std::nullopt, g, 0.1);
  }
  const double want_gap = p.min_gap + 5.0 * p.time_headway;
  const double gap = lead.s - follower.s - kCarLength;
  const double gap_err = std::abs(gap - want_gap) / want_gap;

  // Bicycle turning radius over one lap.
  SimConfig cfg;
  const double steer = 0.3;
  const double radius = cfg.wheelbase / std::tan(steer);
  EgoState s;
  s.box = OrientedBox(Pose2D(0.0, 0.0, 0.0), kCarLength, kCarWidth);
  s.speed = 2.0;
  double radius_err = 0.0;
  const int lap = static_cast<int>(2.0 * std::numbers::pi * radius / (2.0 * 0.01));
  for (int k = 0; k < lap; ++k) {
    s = kinematic_bicycle_step(s, steer, 0.0, cfg, 0.01);
    radius_err = std::max(radius_err, std::abs(std::hypot(s.box.center.x, s.box.center.y - radius) - radius) / radius);
  }

  // Halving dt halves the error.
  const auto end_point = [&](double dt) {
    EgoState e;
    e.box = OrientedBox(Pose2D(0.0, 0.0, 0.0), kCarLength, kCarWidth);
    e.speed = 5.0;
    const int n = static_cast<int>(std::lround(4.0 / dt));
    for (int k = 0; k < n; ++k) {
      e = kinematic_bicycle_step(e, 0.2, 0.5, cfg, dt);
    }
    return e.box.center.position();
  };
  const Vec2 a = end_point(0.1);
  const Vec2 b = end_point(0.05);
  const Vec2 c = end_point(0.025);
  const double ratio = (a - b).norm() / (b - c).norm();

  // Settled cross-track error on a straight 10 m/s reference.
  EgoState ego;
  ego.box = OrientedBox(Pose2D(0.0, 0.5, 0.0), kCarLength, kCarWidth);
  ego.speed = 10.0;
  for (int k = 0; k < 100; ++k) {
    Trajectory t;
    for (int j = 0; j < kTrajectorySamples; ++j) {
      const double time = j * kTrajectoryStep;
      t.samples.push_back({time, Pose2D(ego.box.center.x + 10.0 * time, 0.0, 0.0), 10.0});
    }
    const auto cmd = track_trajectory(t, ego, cfg);
    ego = kinematic_bicycle_step(ego, cmd.steer, cmd.accel, cfg, cfg.dt);
  }
  const double cross = std::abs(ego.box.center.y);

  const bool ok = gap_err < 0.01 && radius_err < 0.01 && ratio >= 1.8 && ratio <= 2.2 && cross < 0.1;
  return {ok, "IDM gap " + fmt("%.3f", gap) + " m vs " + fmt("%.3f", want_gap) + " (" + fmt("%.3f", 100.0 * gap_err) +
                "%), radius error " + fmt("%.3f", 100.0 * radius_err) + "%, dt-halving ratio " + fmt("%.3f", ratio) +
                ", cross-track " + fmt("%.4f", cross) + " m"};
}

Verdict criterion_10()
{
  bool identical = true;
  double serial_total = 0.0;
  std::string per;
  for (const PlannerSpec & p : {PlannerSpec{"idm", {}}, PlannerSpec{"idm_mobil", {}}, PlannerSpec{"sampling", {}},
                                PlannerSpec{"hybrid", {{"selector", "oracle"}}}}) {
    const auto & run = suite_run(p);
    identical = identical && run.csv_identical && run.hashes_identical;
    serial_total += run.serial_seconds;
    per += " " + p.name + "=" + fmt("%.1f", run.serial_seconds) + "s";
  }
  return {identical && serial_total < 300.0,
          std::string("serial vs 8 jobs ") + (identical ? "byte-identical" : "DIFFER") +
            " (scores.csv, hashes.txt); serial suite times" + per + ", total " + fmt("%.1f", serial_total) +
            " s"};
}

Verdict criterion_11()
{
  ::unsetenv("LLM_ENDPOINT");
  ::unsetenv("LLM_API_KEY");
  const auto suite = generate_benchmark_suite(42);
  const ScenarioSpec * overtake = nullptr;
  for (const auto & s : suite) {
    if (s.name == "overtake_00") {
      overtake = &s;
    }
  }
  if (!overtake) {
    return {false, "overtake_00 missing"};
  }
  const auto oracle_run = run_scenario(*overtake, {"hybrid", {{"selector", "oracle"}}}, {});

  httplib::Server server;
  int requests = 0;
  server.Post("/v1/chat/completions", [&](const httplib::Request & req, httplib::Response & res) {
    ++requests;
    const auto body = nlohmann::json::parse(req.body);
    const std::string user = body.at("messages").at(1).at("content").get<std::string>();
    std::string reply;
    if (user.find("overtake_obstacle") != std::string::npos) {
      reply = "The lane is blocked and the oncoming lane is free. overtake_obstacle";
    } else if (user.find("follow_lane") != std::string::npos) {
      reply = "Nothing ahead. follow_lane";
    } else {
      for (int i = 1; i <= 16; ++i) {
        reply += "(" + std::to_string(4.0 * i) + ", 0.0) ";
      }
    }
    res.set_content(nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", reply}}}}}}}.dump(),
                    "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  ClientConfig client;
  client.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  client.timeout = 10.0;
  const ChatClientFactory chat = [client] { return std::make_shared<HttpChatClient>(client); };
  ScenarioResult llm_hybrid;
  ScenarioResult waypoints;
  std::string error;
  try {
    llm_hybrid = run_scenario(*overtake, {"hybrid", {{"selector", "llm"}}}, {}, chat);
    waypoints = run_scenario(suite[30], {"llm_waypoints", {}}, {}, chat);
  } catch (const std::exception & e) {
    error = e.what();
  }
  server.stop();
  worker.join();
  const bool ok = error.empty() && oracle_run.score.score > 0.0 && requests > 0 && llm_hybrid.fallbacks == 0 &&
                  waypoints.fallbacks == 0 && llm_hybrid.score.multipliers.min_progress == 1.0;
  return {ok, "scripted oracle overtake_00 score " + fmt("%.3f", oracle_run.score.score) +
                "; loopback endpoint served " + std::to_string(requests) + " requests, hybrid score " +
                fmt("%.3f", llm_hybrid.score.score) + ", waypoint fallbacks " + std::to_string(waypoints.fallbacks) +
                (error.empty() ? "" : ", error: " + error)};
}

}  // namespace

int main()
{
  const std::vector<std::function<Verdict()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                       criterion_5, criterion_6, criterion_7, criterion_8,
                                                       criterion_9, criterion_10, criterion_11};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception & e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("criterion %zu: %s - %s\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
