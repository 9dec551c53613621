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

#include "longtail/llm.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <regex>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "longtail/agents.hpp"

namespace longtail
{

namespace
{

std::string fmt1(double v)
{
  if (std::abs(v) < 0.05) {
    v = 0.0;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.1f", v);
  return buf;
}

std::string ufmt1(double v)
{
  if (std::abs(v) < 0.05) {
    v = 0.0;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

struct EgoFrame
{
  Pose2D pose;

  Vec2 to_local(const Vec2 & p) const
  {
    const Vec2 r = p - pose.position();
    const Vec2 f = unit_from_heading(pose.heading);
    return {dot(r, f), cross(f, r)};
  }
  Vec2 vel_local(const Vec2 & v) const
  {
    const Vec2 f = unit_from_heading(pose.heading);
    return {dot(v, f), cross(f, v)};
  }
};

std::string normalize_text(std::string text)
{
  for (auto & c : text) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c == '_' || c == '-') {
      c = ' ';
    }
  }
  return text;
}

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string option_line(const BehaviorOption & o, const LaneGraph & graph)
{
  std::ostringstream out;
  out << to_string(o.label) << ": ";
  switch (o.label) {
    case BehaviorLabel::FollowLane:
      out << "keep following lane " << o.centerline << " at up to "
          << ufmt1(o.target_speed_cap) << " m/s";
      break;
    case BehaviorLabel::MergeLeft:
      out << "change into the left lane " << o.centerline;
      break;
    case BehaviorLabel::MergeRight:
      out << "change into the right lane " << o.centerline;
      break;
    case BehaviorLabel::OvertakeObstacle:
      out << "pass the blocking "
          << (o.blocking && o.blocking->is_vehicle ? "stopped vehicle"
                                                   : std::string(to_string(o.blocking->kind)))
          << " " << ufmt1(o.blocking ? o.blocking->distance : 0.0)
          << " m ahead with a lateral offset of " << fmt1(o.lateral_offset) << " m from lane "
          << o.centerline;
      if (std::abs(o.lateral_offset) > 0.5 * graph.lane(o.centerline).width) {
        out << " (uses the adjacent lane)";
      }
      break;
    case BehaviorLabel::StopAndWait:
      out << "brake to a stop and wait";
      break;
  }
  return out.str();
}

// Free space of at least `margin` ahead and behind the ego on `lane`.
bool lane_gap_clear(const Observation & obs, const LaneSegment & lane, double margin)
{
  const double ego_s = project_to_centerline(obs.ego.box.center.position(), lane.centerline).s;
  const double front = ego_s + 0.5 * kCarLength + margin;
  const double rear = ego_s - 0.5 * kCarLength - margin;
  const double half = 0.5 * lane.width;
  auto blocks = [&](const OrientedBox & box) {
    const LaneFootprint fp = footprint_on(box, lane.centerline);
    return fp.d_max >= -half && fp.d_min <= half && fp.s_max >= rear && fp.s_min <= front;
  };
  for (const auto & a : obs.agents) {
    if (blocks(a.box)) {
      return false;
    }
  }
  for (const auto & o : obs.obstacles) {
    if (blocks(o.box)) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string PromptBundle::user_message() const
{
  return "Perception:\n" + perception_context + "\n\nEgo-States:\n" + ego_states +
         "\n\nMission Goal:\n" + mission_goal + "\n\n" + options;
}

SceneDescription render_scene_description(const Observation & obs)
{
  const EgoFrame frame{obs.ego.box.center};
  const LaneGraph & graph = *obs.graph;
  SceneDescription out;

  struct Entry
  {
    double dist;
    std::string text;
  };
  std::vector<Entry> actors;
  for (const auto & a : obs.agents) {
    const Vec2 p = frame.to_local(a.box.center.position());
    const Vec2 v = frame.vel_local(a.velocity());
    actors.push_back({p.norm(), "- vehicle " + std::to_string(a.id) + ": x " + fmt1(p.x) +
                                  " m, y " + fmt1(p.y) + " m, vx " + fmt1(v.x) + " m/s, vy " +
                                  fmt1(v.y) + " m/s, lane " + a.lane});
  }
  for (const auto & ped : obs.pedestrians) {
    const Vec2 p = frame.to_local(ped.position);
    const Vec2 v = frame.vel_local(ped.velocity);
    actors.push_back({p.norm(), "- pedestrian " + std::to_string(ped.id) + ": x " + fmt1(p.x) +
                                  " m, y " + fmt1(p.y) + " m, vx " + fmt1(v.x) + " m/s, vy " +
                                  fmt1(v.y) + " m/s, " + std::string(to_string(ped.phase))});
  }
  std::stable_sort(actors.begin(), actors.end(), [](const Entry & a, const Entry & b) {
    return a.dist < b.dist;
  });
  std::ostringstream perc;
  if (actors.empty()) {
    perc << "No agents detected.";
  } else {
    perc << "Agents (nearest " << std::min<std::size_t>(actors.size(), 10) << "):";
    for (std::size_t i = 0; i < actors.size() && i < 10; ++i) {
      perc << "\n" << actors[i].text;
    }
  }
  if (obs.obstacles.empty()) {
    perc << "\nNo static obstacles detected.";
  } else {
    perc << "\nStatic obstacles:";
    for (const auto & o : obs.obstacles) {
      const Vec2 p = frame.to_local(o.box.center.position());
      perc << "\n- " << to_string(o.kind) << ": x " << fmt1(p.x) << " m, y " << fmt1(p.y)
           << " m, size " << ufmt1(o.box.length) << " x " << ufmt1(o.box.width) << " m";
    }
  }
  out.perception_context = perc.str();

  const LanePosition lp = ego_reference_lane(graph, obs.route, obs.ego.box.center);
  const LaneSegment & lane = graph.lane(lp.lane);
  std::ostringstream ego;
  ego << "Speed: " << ufmt1(obs.ego.speed) << " m/s\n"
      << "Acceleration: " << fmt1(obs.ego.accel) << " m/s^2\n"
      << "Current lane: " << lane.id << " (lateral offset " << fmt1(lp.frenet.d)
      << " m, width " << ufmt1(lane.width) << " m)\n"
      << "Left neighbor lane: " << lane.left_neighbor.value_or("none") << "\n"
      << "Right neighbor lane: " << lane.right_neighbor.value_or("none") << "\n"
      << "Speed limit: " << ufmt1(lane.speed_limit) << " m/s";
  out.ego_states = ego.str();

  std::ostringstream goal;
  goal << "Route lanes:";
  for (std::size_t i = 0; i < obs.route.lane_sequence.size(); ++i) {
    goal << (i == 0 ? " " : " -> ") << obs.route.lane_sequence[i];
  }
  const int pending = pending_lane_changes(graph, obs.route, lane.id);
  goal << "\nLane changes still required: " << pending;
  if (pending > 0) {
    const auto & target = obs.route.lane_sequence.back();
    const bool left = lane.left_neighbor &&
                      pending_lane_changes(graph, obs.route, *lane.left_neighbor) < pending;
    goal << " (toward the " << (left ? "left" : "right") << ", goal lane " << target << ")";
  }
  const Vec2 g = frame.to_local(obs.route.goal_pose.position());
  goal << "\nGoal position: x " << fmt1(g.x) << " m, y " << fmt1(g.y) << " m";
  out.mission_goal = goal.str();
  return out;
}

PromptBundle build_behavior_prompt(
  const Observation & obs, const std::vector<BehaviorOption> & options)
{
  if (options.empty()) {
    throw std::invalid_argument("behavior prompt needs at least one option");
  }
  const SceneDescription scene = render_scene_description(obs);
  PromptBundle p;
  p.task_instruction =
    "You are the behavior planner of an automated vehicle driving on the right-hand side of "
    "the road. Coordinates are in the ego frame: x points forward, y points left, in meters. "
    "Choose exactly one behavior from the list of available behaviors. A motion planner will "
    "turn your choice into a trajectory. Reason briefly, then write only the chosen behavior "
    "label, verbatim, on the final line.";
  p.perception_context = scene.perception_context;
  p.ego_states = scene.ego_states;
  p.mission_goal = scene.mission_goal;
  std::ostringstream opts;
  opts << "Available behaviors:";
  for (std::size_t i = 0; i < options.size(); ++i) {
    opts << "\n" << (i + 1) << ". " << option_line(options[i], *obs.graph);
  }
  p.options = opts.str();
  return p;
}

PromptBundle build_waypoints_prompt(const Observation & obs)
{
  const SceneDescription scene = render_scene_description(obs);
  PromptBundle p;
  p.task_instruction =
    "You are the motion planner of an automated vehicle driving on the right-hand side of the "
    "road. Coordinates are in the ego frame: x points forward, y points left, in meters. Plan a "
    "safe trajectory that follows the route lanes.";
  p.perception_context = scene.perception_context;
  p.ego_states = scene.ego_states;
  p.mission_goal = scene.mission_goal;
  p.options =
    "Trajectory format: output 16 waypoints (x, y) in the ego frame, one every 0.5 s for the "
    "next 8 s, as [(x1, y1), (x2, y2), ..., (x16, y16)] on the final line.";
  return p;
}

SelectorResponse parse_behavior_response(
  const std::string & text, const std::vector<BehaviorOption> & options)
{
  const std::string norm = normalize_text(text);
  std::optional<std::size_t> best_pos;
  BehaviorLabel best{BehaviorLabel::FollowLane};
  for (const auto & o : options) {
    const std::string phrase(to_phrase(o.label));
    const auto pos = norm.rfind(phrase);
    if (pos != std::string::npos && (!best_pos || pos > *best_pos)) {
      best_pos = pos;
      best = o.label;
    }
  }
  if (!best_pos) {
    throw NoLabelFound("response names none of the offered behaviors");
  }
  return {best, trim(text.substr(0, *best_pos))};
}

std::array<Vec2, kWaypointCount> parse_waypoints_response(const std::string & text)
{
  static const std::regex pair_re(
    R"([\(\[]\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*[,;]\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*[\)\]])");
  std::vector<Vec2> run;
  std::size_t run_end = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), pair_re);
       it != std::sregex_iterator(); ++it) {
    const auto & m = *it;
    const auto start = static_cast<std::size_t>(m.position(0));
    bool contiguous = !run.empty();
    if (contiguous) {
      for (std::size_t i = run_end; i < start; ++i) {
        const char c = text[i];
        if (!std::isspace(static_cast<unsigned char>(c)) && c != ',' && c != ';') {
          contiguous = false;
          break;
        }
      }
    }
    if (!contiguous) {
      if (run.size() >= kWaypointCount) {
        break;
      }
      run.clear();
    }
    double x = 0.0;
    double y = 0.0;
    try {
      x = std::stod(m.str(1));
      y = std::stod(m.str(2));
    } catch (const std::out_of_range &) {
      throw MalformedTrajectory("waypoint coordinate out of range");
    }
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw MalformedTrajectory("waypoint coordinate is not finite");
    }
    run.push_back({x, y});
    run_end = start + static_cast<std::size_t>(m.length(0));
  }
  if (run.size() < kWaypointCount) {
    throw MalformedTrajectory(
      "expected 16 waypoints, found " + std::to_string(run.size()) + " in a row");
  }
  std::array<Vec2, kWaypointCount> out;
  std::copy_n(run.begin(), kWaypointCount, out.begin());
  return out;
}

SelectorResponse scripted_oracle(
  ScenarioType type, const Observation & obs, const std::vector<BehaviorOption> & options)
{
  if (options.empty()) {
    throw std::invalid_argument("scripted oracle needs at least one option");
  }
  const LaneGraph & graph = *obs.graph;
  const LanePosition lp = ego_reference_lane(graph, obs.route, obs.ego.box.center);
  const LaneSegment & lane = graph.lane(lp.lane);
  auto pick = [&](BehaviorLabel label, std::string why) -> SelectorResponse {
    if (find_option(options, label)) {
      return {label, std::move(why)};
    }
    return {options.front().label, std::move(why) + " (unavailable, using first option)"};
  };

  if (const BehaviorOption * overtake = find_option(options, BehaviorLabel::OvertakeObstacle)) {
    const double side = overtake->lateral_offset >= 0.0 ? 1.0 : -1.0;
    const BehaviorOption * merge = find_option(
      options, side > 0.0 ? BehaviorLabel::MergeLeft : BehaviorLabel::MergeRight);
    if (merge) {
      if (lane_gap_clear(obs, graph.lane(merge->centerline), 15.0)) {
        return pick(merge->label, "Lane blocked; the parallel lane on the passing side is free.");
      }
      return pick(BehaviorLabel::StopAndWait, "Lane blocked; waiting for a gap next to us.");
    }
    if (lp.frenet.d * side >= 0.5 * std::abs(overtake->lateral_offset)) {
      return pick(BehaviorLabel::OvertakeObstacle, "Already passing the obstacle.");
    }
    const double half = 0.5 * kCarWidth + 0.5;
    const double lo = overtake->lateral_offset - half;
    const double hi = overtake->lateral_offset + half;
    const double v = std::max(obs.ego.speed, 0.0);
    for (const auto & a : obs.agents) {
      const LaneFootprint fp = footprint_on(a.box, lane.centerline);
      if (fp.d_max < lo || fp.d_min > hi) {
        continue;
      }
      const Vec2 t = unit_from_heading(lane.centerline.heading_at(fp.s_center));
      const double vs = dot(a.velocity(), t);
      if (vs > -0.5 || fp.s_center < lp.frenet.s - 5.0) {
        continue;
      }
      const double meet = (fp.s_center - lp.frenet.s) / (v - vs);
      if (meet <= 8.0) {
        return pick(BehaviorLabel::StopAndWait, "Lane blocked and oncoming traffic is close.");
      }
    }
    return pick(BehaviorLabel::OvertakeObstacle, "Lane blocked and the passing lane is clear.");
  }

  const int pending = pending_lane_changes(graph, obs.route, lane.id);
  if (pending > 0 || is_lane_change(type)) {
    for (const auto & [label, neighbor] :
         {std::pair{BehaviorLabel::MergeLeft, lane.left_neighbor},
          std::pair{BehaviorLabel::MergeRight, lane.right_neighbor}}) {
      if (!neighbor || pending_lane_changes(graph, obs.route, *neighbor) >= pending) {
        continue;
      }
      if (find_option(options, label) && lane_gap_clear(obs, graph.lane(*neighbor), 15.0) &&
          !find_blocking(obs, *neighbor)) {
        return pick(label, "The route needs a lane change and the target gap is large enough.");
      }
    }
  }
  return pick(BehaviorLabel::FollowLane, "Nothing requires a maneuver.");
}

void ClientConfig::validate() const
{
  if (!(timeout > 0.0)) {
    throw std::invalid_argument("LLM client timeout must be positive");
  }
  if (max_retries < 0) {
    throw std::invalid_argument("LLM client retries must be non-negative");
  }
}

ClientConfig ClientConfig::from_environment()
{
  ClientConfig cfg;
  if (const char * e = std::getenv("LLM_ENDPOINT")) {
    cfg.endpoint = e;
  }
  if (const char * m = std::getenv("LLM_MODEL")) {
    cfg.model = m;
  }
  if (const char * k = std::getenv("LLM_API_KEY")) {
    cfg.api_key = k;
  }
  return cfg;
}

SelectorResponse LlmSelector::select(
  const Observation & obs, const std::vector<BehaviorOption> & options)
{
  LlmExchange ex;
  ex.time = obs.time;
  ex.prompt = build_behavior_prompt(obs, options);
  try {
    ex.response = client_->complete(ex.prompt);
  } catch (const std::exception & e) {
    ex.error = e.what();
    log_.push_back(ex);
    throw;
  }
  log_.push_back(ex);
  try {
    return parse_behavior_response(ex.response, options);
  } catch (const std::exception & e) {
    log_.back().error = e.what();
    throw;
  }
}

std::string chat_request_body(const PromptBundle & prompt, const ClientConfig & cfg)
{
  nlohmann::json body;
  body["model"] = cfg.model;
  body["temperature"] = cfg.temperature;
  body["messages"] = nlohmann::json::array(
    {{{"role", "system"}, {"content", prompt.task_instruction}},
     {{"role", "user"}, {"content", prompt.user_message()}}});
  return body.dump();
}

namespace
{

struct Endpoint
{
  std::string base;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string & url)
{
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw std::invalid_argument("LLM endpoint must start with http:// or https://");
  }
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) {
    return {url, "/v1/chat/completions"};
  }
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

std::string llm_call(const PromptBundle & prompt, const ClientConfig & cfg)
{
  cfg.validate();
  if (cfg.endpoint.empty()) {
    throw std::invalid_argument("LLM endpoint is not configured (set LLM_ENDPOINT)");
  }
  const Endpoint ep = split_endpoint(cfg.endpoint);
  const std::string body = chat_request_body(prompt, cfg);
  const auto timeout = std::chrono::duration<double>(cfg.timeout);

  std::string last_error;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    httplib::Client client(ep.base);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    httplib::Headers headers;
    if (!cfg.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + cfg.api_key);
    }
    const auto started = std::chrono::steady_clock::now();
    auto res = client.Post(ep.path, headers, body, "application/json");
    if (!res) {
      const auto err = res.error();
      const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      if (err == httplib::Error::ConnectionTimeout ||
          (err == httplib::Error::Read && elapsed >= 0.9 * cfg.timeout)) {
        throw Timeout("LLM request timed out after " + std::to_string(cfg.timeout) + " s");
      }
      last_error = httplib::to_string(err);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw NonSuccessStatus(res->status, res->body);
    }
    try {
      const auto json = nlohmann::json::parse(res->body);
      return json.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception & e) {
      throw LlmError(std::string("malformed chat response: ") + e.what());
    }
  }
  throw TransportError("LLM request failed: " + last_error);
}

HttpChatClient::HttpChatClient(ClientConfig cfg) : cfg_(std::move(cfg))
{
  cfg_.validate();
}

}  // namespace longtail
