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

#include "longtail/sampling_planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "longtail/agents.hpp"

namespace longtail
{

namespace
{

constexpr double kTtcStep = 0.1;
constexpr int kOffroadStride = 5;

struct Prepared
{
  PathFrame frame;
  std::vector<WorldObject> nearby;  // candidates for collision and TTC checks
  std::vector<CandidateEval> evals;
  std::vector<double> lower_bound;
};

int window_samples(double window)
{
  return std::clamp(static_cast<int>(std::floor(window / kTrajectoryStep + 1e-9)), 0,
                    kTrajectorySamples - 1);
}

bool ahead_of(const Pose2D & ego, const Vec2 & p)
{
  return dot(p - ego.position(), unit_from_heading(ego.heading)) > 0.0;
}

Prepared prepare(const Observation & obs, const BehaviorOption & behavior, const SamplingConfig & cfg)
{
  cfg.weights.validate();
  Prepared prep;
  prep.frame = make_path_frame(obs, behavior.centerline);
  const auto world = collect_objects(obs);
  const auto path_objects = project_objects(prep.frame, world);
  const double v = std::max(obs.ego.speed, 0.0);
  const Vec2 ego = obs.ego.box.center.position();
  const double reach_time = cfg.eval_window + 1.0;
  for (const auto & o : world) {
    const double dist = (o.box.center.position() - ego).norm();
    if (dist - o.velocity.norm() * reach_time <= v * reach_time + 15.0) {
      prep.nearby.push_back(o);
    }
  }

  const double cap = std::min(prep.frame.speed_limit, behavior.target_speed_cap);
  RolloutOptions opts;
  opts.forecast_window = cfg.eval_window;
  opts.idm = cfg.idm;
  for (int i = 0; i < static_cast<int>(kOffsetDeltas.size()); ++i) {
    const double delta = kOffsetDeltas[i];
    const LateralProfile lateral =
      make_lateral_profile(prep.frame.d0, prep.frame.slope0, behavior.lateral_offset + delta, v);
    for (int p = 0; p < kProfileCount; ++p) {
      SpeedProfile speed;
      if (p == kFullStopProfile) {
        speed.kind = SpeedProfile::Kind::FullStop;
      } else {
        speed.target_speed = kSpeedFractions[p] * cap;
      }
      Rollout r = rollout(prep.frame, lateral, speed, v, path_objects, opts);
      CandidateEval e;
      e.offset_index = i;
      e.profile = p;
      e.delta = delta;
      e.offset = behavior.lateral_offset + delta;
      e.progress = r.progress;
      e.max_abs_accel = r.max_abs_accel;
      e.trajectory = std::move(r.trajectory);
      prep.evals.push_back(std::move(e));
    }
  }
  double max_progress = 0.0;
  for (const auto & e : prep.evals) {
    max_progress = std::max(max_progress, e.progress);
  }
  const auto & w = cfg.weights;
  for (const auto & e : prep.evals) {
    const double progress_term = max_progress > 1e-6 ? 1.0 - e.progress / max_progress : 0.0;
    prep.lower_bound.push_back(w.progress * progress_term + w.lateral_offset * std::abs(e.delta) +
                               w.comfort * (e.max_abs_accel / kEmergencyDecel));
  }
  return prep;
}

void check_feasibility_and_ttc(
  CandidateEval & e, const Observation & obs, const std::vector<WorldObject> & nearby,
  const SamplingConfig & cfg, double lower_bound)
{
  const auto & samples = e.trajectory.samples;
  const auto & area = obs.graph->drivable_area();
  e.offroad = false;
  for (std::size_t k = 0; k < samples.size() && !e.offroad; k += kOffroadStride) {
    const OrientedBox box(samples[k].pose, kCarLength, kCarWidth);
    for (const auto & c : box.corners()) {
      if (!point_in_any(c, area)) {
        e.offroad = true;
        break;
      }
    }
  }

  const int n = window_samples(cfg.eval_window);
  e.collision = false;
  for (int k = 0; k <= n && !e.collision; ++k) {
    const auto & s = samples[k];
    if (s.speed <= kStaticSpeed) {
      continue;
    }
    const OrientedBox ego(s.pose, kCarLength, kCarWidth);
    for (const auto & o : nearby) {
      const OrientedBox other = o.box_at(s.t);
      if (!boxes_collide(ego, other)) {
        continue;
      }
      if (o.is_static() || ahead_of(s.pose, other.center.position())) {
        e.collision = true;
        break;
      }
    }
  }

  int violations = 0;
  const int ttc_steps = static_cast<int>(std::floor(cfg.ttc_threshold / kTtcStep + 1e-9));
  for (int k = 1; k <= n; ++k) {
    const auto & s = samples[k];
    if (s.speed <= kStaticSpeed) {
      continue;
    }
    const Vec2 dir = unit_from_heading(s.pose.heading);
    bool violated = false;
    for (const auto & o : nearby) {
      if (!ahead_of(s.pose, o.box_at(s.t).center.position())) {
        continue;
      }
      for (int j = 1; j <= ttc_steps && !violated; ++j) {
        const double tau = j * kTtcStep;
        const Vec2 p = s.pose.position() + dir * (s.speed * tau);
        if (boxes_collide(OrientedBox({p.x, p.y, s.pose.heading}, kCarLength, kCarWidth),
                          o.box_at(s.t + tau))) {
          violated = true;
        }
      }
      if (violated) {
        break;
      }
    }
    violations += violated ? 1 : 0;
  }
  e.ttc_violation = n > 0 ? static_cast<double>(violations) / n : 0.0;
  e.cost = lower_bound + cfg.weights.ttc * e.ttc_violation;
}

}  // namespace

void CostWeights::validate() const
{
  if (progress < 0.0 || ttc < 0.0 || lateral_offset < 0.0 || comfort < 0.0) {
    throw std::invalid_argument("cost weights must be non-negative");
  }
}

bool better_candidate(const CandidateEval & a, const CandidateEval & b)
{
  if (a.cost != b.cost) {
    return a.cost < b.cost;
  }
  if (std::abs(a.delta) != std::abs(b.delta)) {
    return std::abs(a.delta) < std::abs(b.delta);
  }
  if (a.progress != b.progress) {
    return a.progress > b.progress;
  }
  // Remaining ties: fixed enumeration order.
  return std::tie(a.offset_index, a.profile) < std::tie(b.offset_index, b.profile);
}

std::vector<CandidateEval> evaluate_all(
  const Observation & obs, const BehaviorOption & behavior, const SamplingConfig & cfg)
{
  Prepared prep = prepare(obs, behavior, cfg);
  for (std::size_t i = 0; i < prep.evals.size(); ++i) {
    check_feasibility_and_ttc(prep.evals[i], obs, prep.nearby, cfg, prep.lower_bound[i]);
  }
  return std::move(prep.evals);
}

CandidateEval select_candidate(
  const Observation & obs, const BehaviorOption & behavior, const SamplingConfig & cfg)
{
  Prepared prep = prepare(obs, behavior, cfg);
  std::vector<std::size_t> order(prep.evals.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (prep.lower_bound[a] != prep.lower_bound[b]) {
      return prep.lower_bound[a] < prep.lower_bound[b];
    }
    return a < b;
  });
  std::optional<std::size_t> best;
  for (const std::size_t i : order) {
    if (best && prep.lower_bound[i] > prep.evals[*best].cost) {
      break;
    }
    check_feasibility_and_ttc(prep.evals[i], obs, prep.nearby, cfg, prep.lower_bound[i]);
    if (!prep.evals[i].feasible()) {
      continue;
    }
    if (!best || better_candidate(prep.evals[i], prep.evals[*best])) {
      best = i;
    }
  }
  if (best) {
    return std::move(prep.evals[*best]);
  }
  const std::size_t stop = 2 * kProfileCount + kFullStopProfile;
  check_feasibility_and_ttc(prep.evals[stop], obs, prep.nearby, cfg, prep.lower_bound[stop]);
  return std::move(prep.evals[stop]);
}

Trajectory sampling_planner_plan(
  const Observation & obs, const SamplingConfig & cfg, const std::optional<BehaviorOption> & behavior)
{
  const BehaviorOption b = behavior ? *behavior : follow_lane_option(obs);
  return select_candidate(obs, b, cfg).trajectory;
}

}  // namespace longtail
