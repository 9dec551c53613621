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

#include "longtail/scenario_io.hpp"

#include <fstream>
#include <sstream>

namespace longtail
{

using nlohmann::json;

namespace
{

json points_to_json(const std::vector<Vec2> & pts)
{
  json out = json::array();
  for (const auto & p : pts) {
    out.push_back({p.x, p.y});
  }
  return out;
}

std::vector<Vec2> points_from_json(const json & j)
{
  std::vector<Vec2> pts;
  for (const auto & p : j) {
    if (!p.is_array() || p.size() != 2) {
      throw MalformedFile("point must be a pair [x, y]");
    }
    pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  return pts;
}

json idm_to_json(const IdmParams & p)
{
  return {{"v0", p.desired_speed}, {"T", p.time_headway}, {"s0", p.min_gap},
          {"a_max", p.max_accel},  {"b_comf", p.comfort_decel}, {"delta", p.exponent}};
}

IdmParams idm_from_json(const json & j)
{
  IdmParams p;
  p.desired_speed = j.at("v0").get<double>();
  p.time_headway = j.at("T").get<double>();
  p.min_gap = j.at("s0").get<double>();
  p.max_accel = j.at("a_max").get<double>();
  p.comfort_decel = j.at("b_comf").get<double>();
  p.exponent = j.at("delta").get<double>();
  p.validate();
  return p;
}

PedestrianPhase phase_from_string(const std::string & name)
{
  for (auto p : {PedestrianPhase::Waiting, PedestrianPhase::Crossing, PedestrianPhase::Done}) {
    if (to_string(p) == name) {
      return p;
    }
  }
  throw MalformedFile("unknown pedestrian phase '" + name + "'");
}

}  // namespace

json pose_to_json(const Pose2D & p)
{
  return {{"x", p.x}, {"y", p.y}, {"heading", p.heading}};
}

Pose2D pose_from_json(const json & j)
{
  return Pose2D(j.at("x").get<double>(), j.at("y").get<double>(), j.at("heading").get<double>());
}

json box_to_json(const OrientedBox & b)
{
  return {{"center", pose_to_json(b.center)}, {"length", b.length}, {"width", b.width}};
}

OrientedBox box_from_json(const json & j)
{
  return OrientedBox(
    pose_from_json(j.at("center")), j.at("length").get<double>(), j.at("width").get<double>());
}

json graph_to_json(const LaneGraph & g)
{
  json lanes = json::array();
  for (const auto & [id, seg] : g.segments()) {
    json l{{"id", id},
           {"centerline", points_to_json(seg.centerline.points())},
           {"width", seg.width},
           {"speed_limit", seg.speed_limit},
           {"successors", seg.successors}};
    l["left"] = seg.left_neighbor ? json(*seg.left_neighbor) : json(nullptr);
    l["right"] = seg.right_neighbor ? json(*seg.right_neighbor) : json(nullptr);
    lanes.push_back(std::move(l));
  }
  json area = json::array();
  for (const auto & poly : g.drivable_area()) {
    area.push_back(points_to_json(poly));
  }
  return {{"lanes", lanes}, {"drivable_area", area}};
}

LaneGraph graph_from_json(const json & j)
{
  std::vector<LaneSegment> segments;
  for (const auto & l : j.at("lanes")) {
    LaneSegment seg;
    seg.id = l.at("id").get<std::string>();
    seg.centerline = Polyline(points_from_json(l.at("centerline")));
    seg.width = l.at("width").get<double>();
    seg.speed_limit = l.at("speed_limit").get<double>();
    seg.successors = l.at("successors").get<std::vector<LaneId>>();
    if (!l.at("left").is_null()) {
      seg.left_neighbor = l.at("left").get<std::string>();
    }
    if (!l.at("right").is_null()) {
      seg.right_neighbor = l.at("right").get<std::string>();
    }
    segments.push_back(std::move(seg));
  }
  std::vector<Polygon> area;
  for (const auto & poly : j.at("drivable_area")) {
    area.push_back(points_from_json(poly));
  }
  return LaneGraph(std::move(segments), std::move(area));
}

json scenario_to_json(const ScenarioSpec & spec)
{
  json vehicles = json::array();
  for (const auto & a : spec.agents) {
    vehicles.push_back({{"id", a.id},
                        {"lane", a.lane},
                        {"s", a.s},
                        {"speed", a.speed},
                        {"length", a.length},
                        {"width", a.width},
                        {"policy", to_string(a.policy)},
                        {"idm", idm_to_json(a.params)},
                        {"active", a.active},
                        {"box", box_to_json(a.box)}});
  }
  json pedestrians = json::array();
  for (const auto & p : spec.pedestrians) {
    pedestrians.push_back({{"id", p.id},
                           {"path", points_to_json(p.path.points())},
                           {"walk_speed", p.walk_speed},
                           {"trigger_distance", p.trigger_distance},
                           {"phase", to_string(p.phase)},
                           {"progress", p.progress},
                           {"position", {p.position.x, p.position.y}}});
  }
  json obstacles = json::array();
  for (const auto & o : spec.obstacles) {
    obstacles.push_back({{"kind", to_string(o.kind)}, {"box", box_to_json(o.box)}, {"lane", o.lane}});
  }
  return {{"version", kScenarioSchemaVersion},
          {"name", spec.name},
          {"type", to_string(spec.type)},
          {"seed", spec.seed},
          {"map", graph_to_json(*spec.graph)},
          {"ego", {{"pose", pose_to_json(spec.ego.pose)}, {"speed", spec.ego.speed}}},
          {"agents", {{"vehicles", vehicles}, {"pedestrians", pedestrians}}},
          {"obstacles", obstacles},
          {"route",
           {{"lanes", spec.route.lane_sequence}, {"goal", pose_to_json(spec.route.goal_pose)}}},
          {"duration", spec.duration}};
}

ScenarioSpec scenario_from_json(const json & j)
{
  if (!j.is_object() || !j.contains("version")) {
    throw MalformedFile("scenario file has no version field");
  }
  if (!j.at("version").is_string()) {
    throw MalformedFile("scenario version must be a string");
  }
  const auto version = j.at("version").get<std::string>();
  if (version != kScenarioSchemaVersion) {
    throw VersionMismatch(
      "scenario schema version '" + version + "' is not supported (expected '" +
      kScenarioSchemaVersion + "')");
  }
  try {
    ScenarioSpec spec;
    spec.name = j.at("name").get<std::string>();
    spec.type = scenario_type_from_string(j.at("type").get<std::string>());
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.graph = std::make_shared<const LaneGraph>(graph_from_json(j.at("map")));
    spec.ego.pose = pose_from_json(j.at("ego").at("pose"));
    spec.ego.speed = j.at("ego").at("speed").get<double>();
    for (const auto & v : j.at("agents").at("vehicles")) {
      AgentState a;
      a.id = v.at("id").get<int>();
      a.lane = v.at("lane").get<std::string>();
      a.s = v.at("s").get<double>();
      a.speed = v.at("speed").get<double>();
      a.length = v.at("length").get<double>();
      a.width = v.at("width").get<double>();
      a.policy = agent_policy_from_string(v.at("policy").get<std::string>());
      a.params = idm_from_json(v.at("idm"));
      a.active = v.at("active").get<bool>();
      a.box = box_from_json(v.at("box"));
      spec.agents.push_back(std::move(a));
    }
    for (const auto & v : j.at("agents").at("pedestrians")) {
      PedestrianState p = make_pedestrian(
        v.at("id").get<int>(), Polyline(points_from_json(v.at("path"))),
        v.at("walk_speed").get<double>(), v.at("trigger_distance").get<double>());
      p.phase = phase_from_string(v.at("phase").get<std::string>());
      p.progress = v.at("progress").get<double>();
      const auto & pos = v.at("position");
      p.position = {pos.at(0).get<double>(), pos.at(1).get<double>()};
      spec.pedestrians.push_back(std::move(p));
    }
    for (const auto & v : j.at("obstacles")) {
      spec.obstacles.push_back({obstacle_kind_from_string(v.at("kind").get<std::string>()),
                                box_from_json(v.at("box")), v.at("lane").get<std::string>()});
    }
    spec.route.lane_sequence = j.at("route").at("lanes").get<std::vector<LaneId>>();
    spec.route.goal_pose = pose_from_json(j.at("route").at("goal"));
    spec.duration = j.at("duration").get<double>();
    validate_scenario(spec);
    return spec;
  } catch (const MalformedFile &) {
    throw;
  } catch (const std::exception & e) {
    throw MalformedFile(std::string("invalid scenario: ") + e.what());
  }
}

std::string dump_scenario(const ScenarioSpec & spec)
{
  return scenario_to_json(spec).dump(1) + "\n";
}

ScenarioSpec parse_scenario(const std::string & text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error & e) {
    throw MalformedFile(std::string("scenario file is not valid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

void save_scenario(const ScenarioSpec & spec, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << dump_scenario(spec);
}

ScenarioSpec load_scenario(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace longtail
