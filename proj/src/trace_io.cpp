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

#include "longtail/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "longtail/rng.hpp"
#include "longtail/scenario_io.hpp"

namespace longtail
{

namespace
{

using nlohmann::json;

json vec_to_json(const Vec2 & v) { return json::array({v.x, v.y}); }

Vec2 vec_from_json(const json & j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json sample_to_json(const TrajectorySample & s)
{
  return json::array({s.t, s.pose.x, s.pose.y, s.pose.heading, s.speed});
}

TrajectorySample sample_from_json(const json & j)
{
  return {j.at(0).get<double>(),
          {j.at(1).get<double>(), j.at(2).get<double>(), j.at(3).get<double>()},
          j.at(4).get<double>()};
}

json snapshot_to_json(const Snapshot & s)
{
  json j;
  j["tick"] = s.tick;
  j["time"] = s.time;
  j["ego"] = {{"box", box_to_json(s.ego.box)},
              {"speed", s.ego.speed},
              {"accel", s.ego.accel},
              {"steering", s.ego.steering}};
  j["agents"] = json::array();
  for (const auto & a : s.agents) {
    j["agents"].push_back({{"id", a.id},
                           {"lane", a.lane},
                           {"s", a.s},
                           {"speed", a.speed},
                           {"active", a.active},
                           {"box", box_to_json(a.box)}});
  }
  j["pedestrians"] = json::array();
  for (const auto & p : s.pedestrians) {
    j["pedestrians"].push_back({{"id", p.id},
                                {"position", vec_to_json(p.position)},
                                {"velocity", vec_to_json(p.velocity)},
                                {"phase", to_string(p.phase)},
                                {"box", box_to_json(p.box)}});
  }
  j["behavior"] = s.behavior ? json(*s.behavior) : json(nullptr);
  j["plan"] = json::array();
  for (const auto & p : s.plan) {
    j["plan"].push_back(sample_to_json(p));
  }
  return j;
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

Snapshot snapshot_from_json(const json & j)
{
  Snapshot s;
  s.tick = j.at("tick").get<int>();
  s.time = j.at("time").get<double>();
  const auto & e = j.at("ego");
  s.ego = {box_from_json(e.at("box")), e.at("speed").get<double>(), e.at("accel").get<double>(),
           e.at("steering").get<double>()};
  for (const auto & a : j.at("agents")) {
    s.agents.push_back({a.at("id").get<int>(), a.at("lane").get<std::string>(),
                        a.at("s").get<double>(), a.at("speed").get<double>(),
                        a.at("active").get<bool>(), box_from_json(a.at("box"))});
  }
  for (const auto & p : j.at("pedestrians")) {
    s.pedestrians.push_back({p.at("id").get<int>(), vec_from_json(p.at("position")),
                             vec_from_json(p.at("velocity")),
                             phase_from_string(p.at("phase").get<std::string>()),
                             box_from_json(p.at("box"))});
  }
  if (!j.at("behavior").is_null()) {
    s.behavior = j.at("behavior").get<std::string>();
  }
  for (const auto & p : j.at("plan")) {
    s.plan.push_back(sample_from_json(p));
  }
  return s;
}

}  // namespace

nlohmann::json trace_to_json(const SimTrace & trace)
{
  json j;
  j["version"] = kTraceSchemaVersion;
  j["scenario"] = trace.scenario;
  j["type"] = to_string(trace.type);
  j["seed"] = trace.seed;
  j["planner"] = trace.planner;
  j["dt"] = trace.dt;
  j["fallback_count"] = trace.fallback_count;
  j["events"] = json::array();
  for (const auto & e : trace.events) {
    j["events"].push_back({{"kind", to_string(e.kind)},
                           {"tick", e.tick},
                           {"time", e.time},
                           {"first", to_string(e.first)},
                           {"first_index", e.first_index},
                           {"second", to_string(e.second)},
                           {"second_index", e.second_index},
                           {"at_fault", e.at_fault},
                           {"detail", e.detail}});
  }
  j["snapshots"] = json::array();
  for (const auto & s : trace.snapshots) {
    j["snapshots"].push_back(snapshot_to_json(s));
  }
  return j;
}

SimTrace trace_from_json(const nlohmann::json & j)
{
  if (!j.is_object() || !j.contains("version")) {
    throw MalformedFile("trace has no version field");
  }
  if (j.at("version") != kTraceSchemaVersion) {
    throw VersionMismatch("unsupported trace version " + j.at("version").dump());
  }
  try {
    SimTrace t;
    t.scenario = j.at("scenario").get<std::string>();
    t.type = scenario_type_from_string(j.at("type").get<std::string>());
    t.seed = j.at("seed").get<std::uint64_t>();
    t.planner = j.at("planner").get<std::string>();
    t.dt = j.at("dt").get<double>();
    t.fallback_count = j.at("fallback_count").get<int>();
    for (const auto & e : j.at("events")) {
      SimEvent ev;
      ev.kind = event_kind_from_string(e.at("kind").get<std::string>());
      ev.tick = e.at("tick").get<int>();
      ev.time = e.at("time").get<double>();
      ev.first = actor_kind_from_string(e.at("first").get<std::string>());
      ev.first_index = e.at("first_index").get<int>();
      ev.second = actor_kind_from_string(e.at("second").get<std::string>());
      ev.second_index = e.at("second_index").get<int>();
      ev.at_fault = e.at("at_fault").get<bool>();
      ev.detail = e.at("detail").get<std::string>();
      t.events.push_back(ev);
    }
    for (const auto & s : j.at("snapshots")) {
      t.snapshots.push_back(snapshot_from_json(s));
    }
    return t;
  } catch (const json::exception & e) {
    throw MalformedFile(std::string("malformed trace: ") + e.what());
  } catch (const std::invalid_argument & e) {
    throw MalformedFile(std::string("malformed trace: ") + e.what());
  }
}

std::string dump_trace(const SimTrace & trace) { return trace_to_json(trace).dump(); }

SimTrace parse_trace(const std::string & text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error & e) {
    throw MalformedFile(std::string("trace is not valid JSON: ") + e.what());
  }
  return trace_from_json(j);
}

std::vector<std::uint8_t> trace_to_cbor(const SimTrace & trace)
{
  return json::to_cbor(trace_to_json(trace));
}

SimTrace trace_from_cbor(const std::vector<std::uint8_t> & bytes)
{
  json j;
  try {
    j = json::from_cbor(bytes);
  } catch (const json::exception & e) {
    throw MalformedFile(std::string("trace is not valid CBOR: ") + e.what());
  }
  return trace_from_json(j);
}

std::uint64_t trace_hash(const SimTrace & trace) { return Rng::hash(dump_trace(trace)); }

std::string hash_hex(std::uint64_t hash)
{
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void save_trace(const SimTrace & trace, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write trace to " + path.string());
  }
  if (path.extension() == ".cbor") {
    const auto bytes = trace_to_cbor(trace);
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  } else {
    out << dump_trace(trace) << '\n';
  }
  if (!out) {
    throw std::runtime_error("failed writing trace to " + path.string());
  }
}

SimTrace load_trace(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read trace " + path.string());
  }
  if (path.extension() == ".cbor") {
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return trace_from_cbor(bytes);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

}  // namespace longtail
