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

#include "longtail/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "longtail/idm_planner.hpp"

namespace longtail
{

using nlohmann::json;

namespace
{

void require(bool ok, const std::string & what)
{
  if (!ok) {
    throw std::invalid_argument("metric config: " + what);
  }
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

template <typename T>
void read_field(const json & j, const char * key, T & out)
{
  if (j.contains(key)) {
    out = j.at(key).get<T>();
  }
}

void reject_unknown(const json & j, std::initializer_list<const char *> keys, const char * where)
{
  for (const auto & [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char * key) { return k == key; })) {
      throw std::invalid_argument(std::string("metric config: unknown key '") + k + "' in " + where);
    }
  }
}

Vec2 to_local(const Pose2D & frame, const Vec2 & p)
{
  const Vec2 r = p - frame.position();
  const double c = std::cos(frame.heading);
  const double s = std::sin(frame.heading);
  return {c * r.x + s * r.y, -s * r.x + c * r.y};
}

Vec2 ego_front(const OrientedBox & box)
{
  return box.center.position() + unit_from_heading(box.center.heading) * (0.5 * box.length);
}

/// Every other actor's box at one snapshot, with its planar velocity.
struct MovingBox
{
  OrientedBox box;
  Vec2 velocity;
};

std::vector<MovingBox> others_at(const ScenarioSpec & spec, const Snapshot & snap)
{
  std::vector<MovingBox> out;
  for (const auto & a : snap.agents) {
    if (a.active) {
      out.push_back({a.box, unit_from_heading(a.box.center.heading) * a.speed});
    }
  }
  for (const auto & p : snap.pedestrians) {
    out.push_back({p.box, p.velocity});
  }
  for (const auto & o : spec.obstacles) {
    out.push_back({o.box, {}});
  }
  return out;
}

OrientedBox shifted(const OrientedBox & b, const Vec2 & by)
{
  return OrientedBox(Pose2D(b.center.x + by.x, b.center.y + by.y, b.center.heading), b.length, b.width);
}

std::vector<double> moving_average(const std::vector<double> & v, int window)
{
  if (window <= 1 || v.empty()) {
    return v;
  }
  const int half = window / 2;
  const int n = static_cast<int>(v.size());
  std::vector<double> out(v.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (int k = lo; k <= hi; ++k) {
      sum += v[k];
    }
    out[i] = sum / (hi - lo + 1);
  }
  return out;
}

std::vector<double> derivative(const std::vector<double> & v, double dt)
{
  std::vector<double> out;
  if (v.size() < 2) {
    return out;
  }
  out.reserve(v.size() - 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    out.push_back((v[i + 1] - v[i]) / dt);
  }
  return out;
}

double lane_speed_limit(const ScenarioSpec & spec, const Pose2D & pose)
{
  const LanePosition lp = ego_reference_lane(*spec.graph, spec.route, pose);
  return spec.graph->lane(lp.lane).speed_limit;
}

/// Hops still needed from `lane`; lanes with no route to the goal count as
/// no progress at all.
int remaining_changes(const ScenarioSpec & spec, const LaneId & lane, int required)
{
  const auto & seq = spec.route.lane_sequence;
  if (std::find(seq.begin(), seq.end(), lane) != seq.end()) {
    return pending_lane_changes(*spec.graph, spec.route, lane);
  }
  try {
    const Route r = shortest_route(*spec.graph, lane, seq.back(), spec.route.goal_pose);
    return lane_changes_required(*spec.graph, r);
  } catch (const NoRoute &) {
    return required;
  }
}

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string percent(const std::optional<double> & v)
{
  if (!v) {
    return "-";
  }
  return std::to_string(static_cast<long>(std::lround(*v * 100.0)));
}

constexpr std::array<const char *, 8> kTypeColumns{
  "Constr.", "Acc.", "Jayw.", "Nudge", "Overt.", "LTD", "MTD", "HTD"};

}  // namespace

void MetricConfig::validate() const
{
  const auto & w = weights;
  for (double v : {w.progress, w.ttc, w.speed_limit, w.comfort, w.lane_change}) {
    require(finite_nonneg(v), "weights must be finite and nonnegative");
  }
  require(w.progress + w.ttc + w.speed_limit + w.comfort + w.lane_change > 0.0, "all weights are zero");
  const auto & c = comfort;
  require(c.min_lon_accel < 0.0 && c.max_lon_accel > 0.0, "longitudinal accel bounds must straddle 0");
  for (double v : {c.max_lat_accel, c.max_lon_jerk, c.max_jerk, c.max_yaw_rate, c.max_yaw_accel}) {
    require(std::isfinite(v) && v > 0.0, "comfort bounds must be positive");
  }
  require(ttc_threshold > 0.0 && ttc_step > 0.0 && ttc_step <= ttc_threshold, "bad ttc threshold or step");
  require(stationary_limit > 0.0 && finite_nonneg(stationary_clearance), "bad stationary settings");
  require(direction_full > 0.0 && direction_half >= direction_full, "direction thresholds must be ordered");
  require(offroad_tolerance >= 0.0 && offroad_tolerance < 1.0, "offroad tolerance must lie in [0, 1)");
  require(smoothing_window >= 1, "smoothing window must be at least 1");
  require(finite_nonneg(lane_hold_time), "lane hold time must be nonnegative");
  require(std::isfinite(min_progress_margin), "min progress margin must be finite");
}

MetricConfig metric_config_from_json(const json & j)
{
  if (!j.is_object()) {
    throw std::invalid_argument("metric config: expected a JSON object");
  }
  reject_unknown(
    j,
    {"weights", "comfort", "ttc_threshold", "ttc_step", "stationary_limit", "stationary_clearance",
     "direction_full", "direction_half", "offroad_tolerance", "smoothing_window", "lane_hold_time",
     "min_progress_margin"},
    "root");
  MetricConfig cfg;
  if (j.contains("weights")) {
    const json & w = j.at("weights");
    reject_unknown(w, {"progress", "ttc", "speed_limit", "comfort", "lane_change"}, "weights");
    read_field(w, "progress", cfg.weights.progress);
    read_field(w, "ttc", cfg.weights.ttc);
    read_field(w, "speed_limit", cfg.weights.speed_limit);
    read_field(w, "comfort", cfg.weights.comfort);
    read_field(w, "lane_change", cfg.weights.lane_change);
  }
  if (j.contains("comfort")) {
    const json & c = j.at("comfort");
    reject_unknown(
      c,
      {"min_lon_accel", "max_lon_accel", "max_lat_accel", "max_lon_jerk", "max_jerk", "max_yaw_rate",
       "max_yaw_accel"},
      "comfort");
    read_field(c, "min_lon_accel", cfg.comfort.min_lon_accel);
    read_field(c, "max_lon_accel", cfg.comfort.max_lon_accel);
    read_field(c, "max_lat_accel", cfg.comfort.max_lat_accel);
    read_field(c, "max_lon_jerk", cfg.comfort.max_lon_jerk);
    read_field(c, "max_jerk", cfg.comfort.max_jerk);
    read_field(c, "max_yaw_rate", cfg.comfort.max_yaw_rate);
    read_field(c, "max_yaw_accel", cfg.comfort.max_yaw_accel);
  }
  read_field(j, "ttc_threshold", cfg.ttc_threshold);
  read_field(j, "ttc_step", cfg.ttc_step);
  read_field(j, "stationary_limit", cfg.stationary_limit);
  read_field(j, "stationary_clearance", cfg.stationary_clearance);
  read_field(j, "direction_full", cfg.direction_full);
  read_field(j, "direction_half", cfg.direction_half);
  read_field(j, "offroad_tolerance", cfg.offroad_tolerance);
  read_field(j, "smoothing_window", cfg.smoothing_window);
  read_field(j, "lane_hold_time", cfg.lane_hold_time);
  read_field(j, "min_progress_margin", cfg.min_progress_margin);
  cfg.validate();
  return cfg;
}

json metric_config_to_json(const MetricConfig & cfg)
{
  const auto & w = cfg.weights;
  const auto & c = cfg.comfort;
  return json{
    {"weights",
     {{"progress", w.progress},
      {"ttc", w.ttc},
      {"speed_limit", w.speed_limit},
      {"comfort", w.comfort},
      {"lane_change", w.lane_change}}},
    {"comfort",
     {{"min_lon_accel", c.min_lon_accel},
      {"max_lon_accel", c.max_lon_accel},
      {"max_lat_accel", c.max_lat_accel},
      {"max_lon_jerk", c.max_lon_jerk},
      {"max_jerk", c.max_jerk},
      {"max_yaw_rate", c.max_yaw_rate},
      {"max_yaw_accel", c.max_yaw_accel}}},
    {"ttc_threshold", cfg.ttc_threshold},
    {"ttc_step", cfg.ttc_step},
    {"stationary_limit", cfg.stationary_limit},
    {"stationary_clearance", cfg.stationary_clearance},
    {"direction_full", cfg.direction_full},
    {"direction_half", cfg.direction_half},
    {"offroad_tolerance", cfg.offroad_tolerance},
    {"smoothing_window", cfg.smoothing_window},
    {"lane_hold_time", cfg.lane_hold_time},
    {"min_progress_margin", cfg.min_progress_margin}};
}

MetricConfig load_metric_config(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("metric config: cannot open " + path.string());
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception & e) {
    throw std::invalid_argument("metric config: " + std::string(e.what()));
  }
  return metric_config_from_json(j);
}

CollisionResult collision_metric(const SimTrace & trace)
{
  CollisionResult r;
  for (const auto & e : trace.events) {
    if (e.kind != EventKind::Collision || e.first != ActorKind::Ego) {
      continue;
    }
    ++r.ego_contacts;
    if (e.at_fault) {
      ++r.at_fault_contacts;
    }
  }
  r.multiplier = r.at_fault_contacts > 0 ? 0.0 : 1.0;
  return r;
}

double drivable_area_metric(const SimTrace & trace, const ScenarioSpec & spec, const MetricConfig & cfg)
{
  for (const auto & snap : trace.snapshots) {
    if (offroad_fraction(snap.ego.box, *spec.graph) > cfg.offroad_tolerance) {
      return 0.0;
    }
  }
  return 1.0;
}

double wrong_way_distance(const SimTrace & trace, const ScenarioSpec & spec)
{
  double total = 0.0;
  for (std::size_t k = 1; k < trace.snapshots.size(); ++k) {
    const Pose2D & prev = trace.snapshots[k - 1].ego.box.center;
    const Pose2D & now = trace.snapshots[k].ego.box.center;
    const auto lanes = spec.graph->lanes_containing(now.position());
    if (lanes.empty()) {
      continue;
    }
    const bool all_opposing = std::all_of(lanes.begin(), lanes.end(), [&](const LanePosition & lp) {
      return std::cos(normalize_angle(lp.lane_heading - now.heading)) < 0.0;
    });
    if (all_opposing) {
      total += (now.position() - prev.position()).norm();
    }
  }
  return total;
}

double driving_direction_metric(
  const SimTrace & trace, const ScenarioSpec & spec, ScenarioType type, const MetricConfig & cfg)
{
  if (type == ScenarioType::Overtake || type == ScenarioType::Accident) {
    return 1.0;
  }
  const double d = wrong_way_distance(trace, spec);
  if (d < cfg.direction_full) {
    return 1.0;
  }
  return d < cfg.direction_half ? 0.5 : 0.0;
}

double stationary_metric(const SimTrace & trace, const ScenarioSpec & spec, const MetricConfig & cfg)
{
  constexpr double kStopped = 0.1;
  const double dt = trace.dt;
  double run = 0.0;
  for (const auto & snap : trace.snapshots) {
    const EgoState & ego = snap.ego;
    bool unjustified = ego.speed < kStopped;
    if (unjustified) {
      const double half_len = 0.5 * ego.box.length;
      const double half_w = 0.5 * ego.box.width + 0.5;
      for (const auto & other : others_at(spec, snap)) {
        double min_x = std::numeric_limits<double>::infinity();
        double min_y = min_x;
        double max_y = -min_x;
        for (const auto & c : other.box.corners()) {
          const Vec2 l = to_local(ego.box.center, c);
          min_x = std::min(min_x, l.x);
          min_y = std::min(min_y, l.y);
          max_y = std::max(max_y, l.y);
        }
        const bool ahead = min_x - half_len <= cfg.stationary_clearance &&
                           to_local(ego.box.center, other.box.center.position()).x > 0.0;
        if (ahead && max_y >= -half_w && min_y <= half_w) {
          unjustified = false;
          break;
        }
      }
    }
    run = unjustified ? run + dt : 0.0;
    if (run > cfg.stationary_limit + 1e-9) {
      return 0.0;
    }
  }
  return 1.0;
}

double ttc_metric(const SimTrace & trace, const ScenarioSpec & spec, const MetricConfig & cfg)
{
  constexpr double kMovingSpeed = 0.05;
  if (trace.snapshots.empty()) {
    return 1.0;
  }
  const int steps = static_cast<int>(std::floor(cfg.ttc_threshold / cfg.ttc_step + 1e-9));
  int violations = 0;
  for (const auto & snap : trace.snapshots) {
    const EgoState & ego = snap.ego;
    if (ego.speed < kMovingSpeed) {
      continue;
    }
    const Vec2 ego_v = unit_from_heading(ego.box.center.heading) * ego.speed;
    bool violated = false;
    for (const auto & other : others_at(spec, snap)) {
      if (to_local(ego.box.center, other.box.center.position()).x <= 0.0) {
        continue;
      }
      for (int i = 0; i <= steps && !violated; ++i) {
        const double t = i * cfg.ttc_step;
        violated = boxes_collide(shifted(ego.box, ego_v * t), shifted(other.box, other.velocity * t));
      }
      if (violated) {
        break;
      }
    }
    violations += violated ? 1 : 0;
  }
  return 1.0 - static_cast<double>(violations) / static_cast<double>(trace.snapshots.size());
}

ComfortSignals comfort_signals(const SimTrace & trace, int smoothing_window)
{
  ComfortSignals out;
  const auto & snaps = trace.snapshots;
  if (snaps.size() < 2) {
    return out;
  }
  const double dt = trace.dt;
  std::vector<double> speed;
  std::vector<double> yaw_rate;
  speed.reserve(snaps.size());
  for (const auto & s : snaps) {
    speed.push_back(s.ego.speed);
  }
  for (std::size_t k = 0; k + 1 < snaps.size(); ++k) {
    const double dh = normalize_angle(snaps[k + 1].ego.box.center.heading - snaps[k].ego.box.center.heading);
    yaw_rate.push_back(dh / dt);
  }
  out.lon_accel = moving_average(derivative(speed, dt), smoothing_window);
  out.yaw_rate = moving_average(yaw_rate, smoothing_window);
  out.lat_accel.resize(out.yaw_rate.size());
  for (std::size_t k = 0; k < out.yaw_rate.size(); ++k) {
    out.lat_accel[k] = 0.5 * (speed[k] + speed[k + 1]) * out.yaw_rate[k];
  }
  out.lon_jerk = moving_average(derivative(out.lon_accel, dt), smoothing_window);
  const auto lat_jerk = moving_average(derivative(out.lat_accel, dt), smoothing_window);
  out.jerk.resize(out.lon_jerk.size());
  for (std::size_t k = 0; k < out.jerk.size(); ++k) {
    out.jerk[k] = std::hypot(out.lon_jerk[k], lat_jerk[k]);
  }
  out.yaw_accel = moving_average(derivative(out.yaw_rate, dt), smoothing_window);
  return out;
}

double comfort_metric(const SimTrace & trace, const MetricConfig & cfg)
{
  const ComfortSignals sig = comfort_signals(trace, cfg.smoothing_window);
  const auto & b = cfg.comfort;
  const auto within = [](const std::vector<double> & v, double lo, double hi) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x >= lo && x <= hi; });
  };
  const bool ok = within(sig.lon_accel, b.min_lon_accel, b.max_lon_accel) &&
                  within(sig.lat_accel, -b.max_lat_accel, b.max_lat_accel) &&
                  within(sig.lon_jerk, -b.max_lon_jerk, b.max_lon_jerk) &&
                  within(sig.jerk, 0.0, b.max_jerk) &&
                  within(sig.yaw_rate, -b.max_yaw_rate, b.max_yaw_rate) &&
                  within(sig.yaw_accel, -b.max_yaw_accel, b.max_yaw_accel);
  return ok ? 1.0 : 0.0;
}

double speed_limit_metric(const SimTrace & trace, const ScenarioSpec & spec)
{
  double over = 0.0;
  double budget = 0.0;
  for (const auto & snap : trace.snapshots) {
    const double limit = lane_speed_limit(spec, snap.ego.box.center);
    over += std::max(0.0, snap.ego.speed - limit);
    budget += limit;
  }
  if (budget <= 0.0) {
    return 1.0;
  }
  return std::max(0.0, 1.0 - over / budget);
}

double route_progress(const SimTrace & trace, const ScenarioSpec & spec)
{
  double total = 0.0;
  for (std::size_t k = 1; k < trace.snapshots.size(); ++k) {
    const Pose2D & prev = trace.snapshots[k - 1].ego.box.center;
    const Pose2D & now = trace.snapshots[k].ego.box.center;
    const LanePosition lp = ego_reference_lane(*spec.graph, spec.route, prev);
    total += dot(now.position() - prev.position(), unit_from_heading(lp.lane_heading));
  }
  return total;
}

double reference_progress(const ScenarioSpec & spec)
{
  ScenarioSpec clear = spec;
  clear.obstacles.clear();
  clear.pedestrians.clear();
  IdmPlanner idm(IdmParams::for_speed_limit(spec.ego_lane().speed_limit));
  const SimTrace ref = run_closed_loop(clear, idm);
  return route_progress(ref, clear);
}

double progress_metric(const SimTrace & trace, const ScenarioSpec & spec, double reference)
{
  if (reference <= 1e-6) {
    return 1.0;
  }
  return std::clamp(route_progress(trace, spec) / reference, 0.0, 1.0);
}

double lane_change_completion(const SimTrace & trace, const ScenarioSpec & spec, const MetricConfig & cfg)
{
  const int required = lane_changes_required(*spec.graph, spec.route);
  if (required == 0) {
    return 1.0;
  }
  int best = 0;
  std::optional<LaneId> lane;
  double since = 0.0;
  for (const auto & snap : trace.snapshots) {
    const LaneId now = spec.graph->locate(snap.ego.box.center).lane;
    if (!lane || *lane != now) {
      lane = now;
      since = snap.time;
    }
    if (snap.time - since + 1e-9 >= cfg.lane_hold_time) {
      best = std::max(best, required - remaining_changes(spec, now, required));
    }
  }
  return static_cast<double>(std::clamp(best, 0, required)) / required;
}

double min_progress_multiplier(const SimTrace & trace, const ScenarioSpec & spec, const MetricConfig & cfg)
{
  std::map<LaneId, double> far_end;
  for (const auto & o : spec.obstacles) {
    if (!o.blocks_progress() || !spec.graph->contains(o.lane)) {
      continue;
    }
    const Polyline & line = spec.graph->lane(o.lane).centerline;
    double far = -std::numeric_limits<double>::infinity();
    for (const auto & c : o.box.corners()) {
      far = std::max(far, project_to_centerline(c, line).s);
    }
    auto [it, inserted] = far_end.emplace(o.lane, far);
    if (!inserted) {
      it->second = std::max(it->second, far);
    }
  }
  for (const auto & [lane_id, far] : far_end) {
    const Polyline & line = spec.graph->lane(lane_id).centerline;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto & snap : trace.snapshots) {
      best = std::max(best, project_to_centerline(ego_front(snap.ego.box), line).s);
    }
    if (best < far + cfg.min_progress_margin) {
      return 0.0;
    }
  }
  return 1.0;
}

ScenarioScore aggregate_score(
  const ScoreComponents & c, const ScoreMultipliers & m, const MetricConfig & cfg, ScenarioType type)
{
  const auto & w = cfg.weights;
  double num = w.progress * c.progress + w.ttc * c.ttc + w.speed_limit * c.speed_limit + w.comfort * c.comfort;
  double den = w.progress + w.ttc + w.speed_limit + w.comfort;
  if (is_lane_change(type)) {
    num += w.lane_change * c.lane_change;
    den += w.lane_change;
  }
  const bool exempt = type == ScenarioType::Overtake || type == ScenarioType::Accident;
  const double direction = exempt ? 1.0 : m.direction;
  const double gate = m.collision * m.drivable * direction * m.stationary * m.min_progress;
  ScenarioScore s;
  s.type = type;
  s.components = c;
  s.multipliers = m;
  s.multipliers.direction = direction;
  s.score = den > 0.0 ? std::clamp(num / den * gate, 0.0, 1.0) : 0.0;
  if (gate == 0.0) {
    s.score = 0.0;
  }
  return s;
}

ScenarioScore score_scenario(
  const SimTrace & trace, const ScenarioSpec & spec, const MetricConfig & cfg, std::optional<double> reference)
{
  const double ref = reference ? *reference : reference_progress(spec);
  ScoreComponents c;
  c.progress = progress_metric(trace, spec, ref);
  c.ttc = ttc_metric(trace, spec, cfg);
  c.speed_limit = speed_limit_metric(trace, spec);
  c.comfort = comfort_metric(trace, cfg);
  c.lane_change = lane_change_completion(trace, spec, cfg);
  ScoreMultipliers m;
  m.collision = collision_metric(trace).multiplier;
  m.drivable = drivable_area_metric(trace, spec, cfg);
  m.direction = driving_direction_metric(trace, spec, spec.type, cfg);
  m.stationary = stationary_metric(trace, spec, cfg);
  m.min_progress = min_progress_multiplier(trace, spec, cfg);
  ScenarioScore s = aggregate_score(c, m, cfg, spec.type);
  s.scenario = spec.name;
  return s;
}

SuiteReport suite_report(const std::string & planner, const std::vector<ScenarioScore> & scores)
{
  SuiteReport r;
  r.planner = planner;
  r.scenario_count = static_cast<int>(scores.size());
  std::array<double, kAllScenarioTypes.size()> sum{};
  std::array<int, kAllScenarioTypes.size()> count{};
  double total = 0.0;
  double driv = 0.0;
  double goal = 0.0;
  double nocol = 0.0;
  int lane_change = 0;
  for (const auto & s : scores) {
    const auto idx = static_cast<std::size_t>(s.type);
    sum[idx] += s.score;
    ++count[idx];
    total += s.score;
    if (is_lane_change(s.type)) {
      ++lane_change;
      driv += s.multipliers.drivable;
      goal += s.components.lane_change >= 1.0 ? 1.0 : 0.0;
      nocol += s.multipliers.collision;
    }
  }
  for (std::size_t i = 0; i < sum.size(); ++i) {
    if (count[i] > 0) {
      r.per_type[i] = sum[i] / count[i];
    }
  }
  r.overall = scores.empty() ? 0.0 : total / static_cast<double>(scores.size());
  if (lane_change > 0) {
    r.drivable = driv / lane_change;
    r.goal = goal / lane_change;
    r.no_collision = nocol / lane_change;
  }
  return r;
}

std::string scores_csv(const std::vector<ScenarioScore> & scores)
{
  std::ostringstream out;
  out << "scenario,type,progress,ttc,speed_limit,comfort,lane_change,"
         "collision,drivable,direction,stationary,min_progress,score\n";
  for (const auto & s : scores) {
    const auto & c = s.components;
    const auto & m = s.multipliers;
    out << s.scenario << ',' << to_string(s.type);
    for (double v : {c.progress, c.ttc, c.speed_limit, c.comfort, c.lane_change, m.collision, m.drivable,
                     m.direction, m.stationary, m.min_progress, s.score}) {
      out << ',' << fmt(v);
    }
    out << '\n';
  }
  return out.str();
}

std::vector<ScenarioScore> parse_scores_csv(const std::string & text)
{
  std::istringstream in(text);
  std::string line;
  std::vector<ScenarioScore> out;
  if (!std::getline(in, line)) {
    return out;
  }
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      cells.push_back(cell);
    }
    if (cells.size() != 13) {
      throw std::invalid_argument("scores csv: expected 13 columns, got " + std::to_string(cells.size()));
    }
    ScenarioScore s;
    s.scenario = cells[0];
    s.type = scenario_type_from_string(cells[1]);
    double * fields[] = {
      &s.components.progress,   &s.components.ttc,         &s.components.speed_limit,
      &s.components.comfort,    &s.components.lane_change, &s.multipliers.collision,
      &s.multipliers.drivable,  &s.multipliers.direction,  &s.multipliers.stationary,
      &s.multipliers.min_progress, &s.score};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      *fields[i] = std::stod(cells[i + 2]);
    }
    out.push_back(s);
  }
  return out;
}

std::string report_table_markdown(const std::vector<SuiteReport> & reports)
{
  std::ostringstream out;
  out << "| Planner | Overall |";
  for (const char * col : kTypeColumns) {
    out << ' ' << col << " |";
  }
  out << " Driv. | Goal | No-Col. |\n";
  out << "|---|---:|";
  for (std::size_t i = 0; i < kTypeColumns.size() + 3; ++i) {
    out << "---:|";
  }
  out << '\n';
  for (const auto & r : reports) {
    out << "| " << r.planner << " | " << percent(r.overall) << " |";
    for (const auto & v : r.per_type) {
      out << ' ' << percent(v) << " |";
    }
    out << ' ' << percent(r.drivable) << " | " << percent(r.goal) << " | " << percent(r.no_collision) << " |\n";
  }
  return out.str();
}

json report_to_json(const SuiteReport & report)
{
  const auto opt = [](const std::optional<double> & v) { return v ? json(*v) : json(nullptr); };
  json types = json::object();
  for (std::size_t i = 0; i < kAllScenarioTypes.size(); ++i) {
    types[std::string(to_string(kAllScenarioTypes[i]))] = opt(report.per_type[i]);
  }
  return json{
    {"planner", report.planner},
    {"scenario_count", report.scenario_count},
    {"overall", report.overall},
    {"per_type", types},
    {"drivable", opt(report.drivable)},
    {"goal", opt(report.goal)},
    {"no_collision", opt(report.no_collision)}};
}

SuiteReport report_from_json(const json & j)
{
  const auto opt = [](const json & v) -> std::optional<double> {
    if (v.is_null()) {
      return std::nullopt;
    }
    return v.get<double>();
  };
  try {
    SuiteReport r;
    r.planner = j.at("planner").get<std::string>();
    r.scenario_count = j.at("scenario_count").get<int>();
    r.overall = j.at("overall").get<double>();
    for (const auto & [key, value] : j.at("per_type").items()) {
      r.per_type[static_cast<std::size_t>(scenario_type_from_string(key))] = opt(value);
    }
    r.drivable = opt(j.at("drivable"));
    r.goal = opt(j.at("goal"));
    r.no_collision = opt(j.at("no_collision"));
    return r;
  } catch (const json::exception & e) {
    throw std::invalid_argument(std::string("suite report: ") + e.what());
  }
}

}  // namespace longtail
