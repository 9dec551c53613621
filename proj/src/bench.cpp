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

#include "longtail/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "longtail/hybrid_planner.hpp"
#include "longtail/idm_planner.hpp"
#include "longtail/sampling_planner.hpp"
#include "longtail/scenario_io.hpp"
#include "longtail/trace_io.hpp"
#include "longtail/waypoints_planner.hpp"

namespace longtail
{

using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

constexpr const char * kEgoColor = "#f28e2b";
constexpr const char * kRouteColor = "#7b3294";
constexpr const char * kVehicleColor = "#4e79a7";
constexpr const char * kPedestrianColor = "#59a14f";
constexpr const char * kConeColor = "#e15759";
constexpr const char * kLaneColor = "#9a9a9a";

/// Consumes the numeric parameters it knows and leaves the rest.
class ParamReader
{
public:
  ParamReader(const PlannerSpec & spec) : spec_(spec), left_(spec.params) {}

  void number(const char * key, double & out)
  {
    const auto it = left_.find(key);
    if (it == left_.end()) {
      return;
    }
    try {
      std::size_t used = 0;
      out = std::stod(it->second, &used);
      if (used != it->second.size()) {
        throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception &) {
      throw ConfigError("planner parameter " + it->first + ": not a number: '" + it->second + "'");
    }
    left_.erase(it);
  }

  std::optional<std::string> text(const char * key)
  {
    const auto it = left_.find(key);
    if (it == left_.end()) {
      return std::nullopt;
    }
    std::string v = it->second;
    left_.erase(it);
    return v;
  }

  void finish() const
  {
    if (!left_.empty()) {
      throw ConfigError(
        "planner '" + spec_.name + "' has no parameter '" + left_.begin()->first + "'");
    }
  }

private:
  const PlannerSpec & spec_;
  std::map<std::string, std::string> left_;
};

IdmParams read_idm(ParamReader & r)
{
  IdmParams p;
  r.number("T", p.time_headway);
  r.number("s0", p.min_gap);
  r.number("a_max", p.max_accel);
  r.number("b_comf", p.comfort_decel);
  r.number("delta", p.exponent);
  return p;
}

SamplingConfig read_sampling(ParamReader & r)
{
  SamplingConfig cfg;
  r.number("eval_window", cfg.eval_window);
  r.number("ttc_threshold", cfg.ttc_threshold);
  r.number("w_progress", cfg.weights.progress);
  r.number("w_ttc", cfg.weights.ttc);
  r.number("w_lateral", cfg.weights.lateral_offset);
  r.number("w_comfort", cfg.weights.comfort);
  if (!(cfg.eval_window > 0.0) || cfg.eval_window > kTrajectoryHorizon) {
    throw ConfigError("eval_window must lie in (0, 8] s");
  }
  if (!(cfg.ttc_threshold > 0.0)) {
    throw ConfigError("ttc_threshold must be positive");
  }
  return cfg;
}

template <typename F>
auto checked(F && f)
{
  try {
    return f();
  } catch (const ConfigError &) {
    throw;
  } catch (const std::invalid_argument & e) {
    throw ConfigError(e.what());
  }
}

void write_file(const fs::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
}

void ensure_dir(const fs::path & dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError("cannot create output directory " + dir.string());
  }
}

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string points_attr(const std::vector<Vec2> & pts)
{
  std::string out;
  for (const auto & p : pts) {
    if (!out.empty()) {
      out += ' ';
    }
    out += num(p.x) + ',' + num(p.y);
  }
  return out;
}

std::string box_polygon(const OrientedBox & box, const char * cls, const char * fill)
{
  const auto c = box.corners();
  return "<polygon class=\"" + std::string(cls) + "\" points=\"" +
         points_attr({c.begin(), c.end()}) + "\" fill=\"" + fill + "\" stroke=\"#333333\" stroke-width=\"0.1\"/>\n";
}

}  // namespace

std::string PlannerSpec::label() const
{
  if (params.empty()) {
    return name;
  }
  std::string out = name + '[';
  bool first = true;
  for (const auto & [k, v] : params) {
    out += (first ? "" : ",") + k + '=' + v;
    first = false;
  }
  return out + ']';
}

std::vector<std::string> registered_planners()
{
  return {"idm", "idm_mobil", "sampling", "hybrid", "llm_waypoints"};
}

std::pair<std::string, std::string> parse_param(const std::string & text)
{
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("planner parameter must look like key=value: '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

ChatClientFactory environment_chat_client()
{
  return [] {
    ClientConfig cfg = ClientConfig::from_environment();
    checked([&] {
      cfg.validate();
      return 0;
    });
    return std::make_shared<HttpChatClient>(cfg);
  };
}

std::unique_ptr<Planner> make_planner(
  const PlannerSpec & planner, const ScenarioSpec & spec, const ChatClientFactory & chat)
{
  ParamReader r(planner);
  const auto client = [&] {
    const ChatClientFactory & f = chat ? chat : environment_chat_client();
    auto c = f();
    if (!c) {
      throw ConfigError("chat client factory returned nothing");
    }
    return c;
  };
  std::unique_ptr<Planner> out;
  if (planner.name == "idm") {
    const IdmParams p = read_idm(r);
    checked([&] {
      p.validate();
      return 0;
    });
    out = std::make_unique<IdmPlanner>(p);
  } else if (planner.name == "idm_mobil") {
    const IdmParams p = read_idm(r);
    MobilParams mp;
    r.number("politeness", mp.politeness);
    r.number("accel_threshold", mp.accel_threshold);
    r.number("safe_decel", mp.safe_decel);
    r.number("route_bias", mp.route_bias);
    checked([&] {
      p.validate();
      mp.validate();
      return 0;
    });
    out = std::make_unique<IdmMobilPlanner>(mp, p);
  } else if (planner.name == "sampling") {
    out = std::make_unique<SamplingPlanner>(read_sampling(r));
  } else if (planner.name == "hybrid") {
    const SamplingConfig cfg = read_sampling(r);
    const std::string selector = r.text("selector").value_or("oracle");
    double dwell = 0.0;
    r.number("dwell_time", dwell);
    r.finish();
    std::shared_ptr<BehaviorSelector> sel;
    if (selector == "oracle") {
      sel = std::make_shared<OracleSelector>(spec.type);
    } else if (selector == "llm") {
      sel = std::make_shared<LlmSelector>(client());
    } else {
      throw ConfigError("hybrid selector must be 'oracle' or 'llm', got '" + selector + "'");
    }
    if (!(dwell >= 0.0)) {
      throw ConfigError("hybrid dwell_time must be non-negative");
    }
    out = std::make_unique<HybridPlanner>(sel, cfg, dwell);
  } else if (planner.name == "llm_waypoints") {
    r.finish();
    out = std::make_unique<WaypointsPlanner>(client());
  } else {
    throw ConfigError("unknown planner '" + planner.name + "'");
  }
  r.finish();
  return out;
}

const std::vector<LlmExchange> * planner_exchanges(const Planner & planner)
{
  if (const auto * h = dynamic_cast<const HybridPlanner *>(&planner)) {
    return h->selector().exchanges();
  }
  if (const auto * w = dynamic_cast<const WaypointsPlanner *>(&planner)) {
    return &w->exchanges();
  }
  return nullptr;
}

json exchanges_to_json(const std::vector<LlmExchange> & log)
{
  json out = json::array();
  for (const auto & e : log) {
    out.push_back(
      {{"time", e.time},
       {"task_instruction", e.prompt.task_instruction},
       {"perception_context", e.prompt.perception_context},
       {"ego_states", e.prompt.ego_states},
       {"mission_goal", e.prompt.mission_goal},
       {"options", e.prompt.options},
       {"response", e.response},
       {"error", e.error}});
  }
  return out;
}

void RunConfig::validate() const
{
  if (jobs < 1) {
    throw ConfigError("jobs must be at least 1");
  }
  const auto names = registered_planners();
  if (std::find(names.begin(), names.end(), planner.name) == names.end()) {
    throw ConfigError("unknown planner '" + planner.name + "'");
  }
  for (int i : indices) {
    if (i < 0 || i > 9) {
      throw ConfigError("scenario index out of range [0, 9]: " + std::to_string(i));
    }
  }
}

std::vector<ScenarioSpec> select_scenarios(
  const std::vector<ScenarioSpec> & suite, const std::vector<ScenarioType> & types,
  const std::vector<int> & indices)
{
  std::map<ScenarioType, int> seen;
  std::vector<ScenarioSpec> out;
  for (const auto & spec : suite) {
    const int index = seen[spec.type]++;
    const bool type_ok = types.empty() || std::find(types.begin(), types.end(), spec.type) != types.end();
    const bool index_ok = indices.empty() || std::find(indices.begin(), indices.end(), index) != indices.end();
    if (type_ok && index_ok) {
      out.push_back(spec);
    }
  }
  return out;
}

ScenarioResult run_scenario(
  const ScenarioSpec & spec, const PlannerSpec & planner, const MetricConfig & metrics,
  const ChatClientFactory & chat, SimTrace * trace_out)
{
  auto p = make_planner(planner, spec, chat);
  SimTrace trace = run_closed_loop(spec, *p);
  ScenarioResult r;
  r.score = score_scenario(trace, spec, metrics);
  r.trace_hash = trace_hash(trace);
  r.fallbacks = trace.fallback_count;
  if (trace_out) {
    *trace_out = std::move(trace);
  }
  return r;
}

std::string hashes_text(const std::vector<ScenarioSpec> & specs, const std::vector<ScenarioResult> & results)
{
  std::string out;
  for (std::size_t i = 0; i < specs.size() && i < results.size(); ++i) {
    out += specs[i].name + ' ' + hash_hex(results[i].trace_hash) + '\n';
  }
  return out;
}

BenchmarkResult run_benchmark(const RunConfig & cfg, const ChatClientFactory & chat)
{
  cfg.validate();
  const MetricConfig metrics = cfg.metric_config ? load_metric_config(*cfg.metric_config) : MetricConfig{};
  const auto specs = select_scenarios(generate_benchmark_suite(cfg.master_seed), cfg.types, cfg.indices);
  if (!specs.empty()) {
    make_planner(cfg.planner, specs.front(), chat);  // fail fast on bad parameters
  }
  const bool write = !cfg.out.empty();
  if (write) {
    for (const char * sub : {"", "scenarios", "traces"}) {
      ensure_dir(cfg.out / sub);
    }
  }

  std::vector<ScenarioResult> results(specs.size());
  std::vector<std::exception_ptr> errors(specs.size());
  std::atomic<std::size_t> next{0};
  std::mutex fs_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        const ScenarioSpec & spec = specs[i];
        auto p = make_planner(cfg.planner, spec, chat);
        SimTrace trace = run_closed_loop(spec, *p);
        ScenarioResult & r = results[i];
        r.score = score_scenario(trace, spec, metrics);
        r.trace_hash = trace_hash(trace);
        r.fallbacks = trace.fallback_count;
        if (write) {
          save_scenario(spec, cfg.out / "scenarios" / (spec.name + ".json"));
          save_trace(trace, cfg.out / "traces" / (spec.name + (cfg.cbor_traces ? ".cbor" : ".json")));
          if (const auto * log = planner_exchanges(*p)) {
            {
              std::lock_guard<std::mutex> lock(fs_mutex);
              ensure_dir(cfg.out / "llm");
            }
            write_file(cfg.out / "llm" / (spec.name + ".json"), exchanges_to_json(*log).dump(2) + "\n");
          }
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::min<int>(cfg.jobs, std::max<std::size_t>(specs.size(), 1));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n; ++k) {
      pool.emplace_back(worker);
    }
    for (auto & t : pool) {
      t.join();
    }
  }
  for (const auto & e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  BenchmarkResult out;
  out.results = std::move(results);
  std::vector<ScenarioScore> scores;
  for (const auto & r : out.results) {
    scores.push_back(r.score);
  }
  out.report = suite_report(cfg.planner.label(), scores);
  if (write) {
    write_file(cfg.out / "scores.csv", scores_csv(scores));
    write_file(cfg.out / "hashes.txt", hashes_text(specs, out.results));
    write_file(cfg.out / "report.md", compare_reports({out.report}));
    write_file(cfg.out / "report.json", report_to_json(out.report).dump(2) + "\n");
  }
  return out;
}

std::string render_svg(const ScenarioSpec & spec, const SimTrace * trace, std::optional<int> tick)
{
  const LaneGraph & graph = *spec.graph;
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const auto & [id, lane] : graph.segments()) {
    for (const auto & p : lane_corridor_polygon(lane)) {
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
  }
  const double pad = 5.0;
  min_x -= pad;
  min_y -= pad;
  max_x += pad;
  max_y += pad;

  const Snapshot * snap = nullptr;
  int at = 0;
  if (trace && !trace->snapshots.empty()) {
    const int last = static_cast<int>(trace->snapshots.size()) - 1;
    at = std::clamp(tick.value_or(last), 0, last);
    snap = &trace->snapshots[at];
  }

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(min_x) << ' ' << num(-max_y) << ' '
    << num(max_x - min_x) << ' ' << num(max_y - min_y) << "\" width=\"" << num(4.0 * (max_x - min_x))
    << "\" height=\"" << num(4.0 * (max_y - min_y)) << "\">\n";
  o << "<title>" << spec.name << (snap ? " t=" + num(snap->time) + "s" : std::string()) << "</title>\n";
  o << "<rect x=\"" << num(min_x) << "\" y=\"" << num(-max_y) << "\" width=\"" << num(max_x - min_x)
    << "\" height=\"" << num(max_y - min_y) << "\" fill=\"#ffffff\"/>\n";
  o << "<g transform=\"scale(1,-1)\">\n";
  for (const auto & poly : graph.drivable_area()) {
    o << "<polygon class=\"drivable\" points=\"" << points_attr(poly) << "\" fill=\"#f0f0f0\" stroke=\"none\"/>\n";
  }
  for (const auto & [id, lane] : graph.segments()) {
    o << "<polygon class=\"lane\" points=\"" << points_attr(lane_corridor_polygon(lane))
      << "\" fill=\"none\" stroke=\"" << kLaneColor << "\" stroke-width=\"0.15\"/>\n";
  }
  for (const auto & id : spec.route.lane_sequence) {
    o << "<polyline class=\"route\" points=\"" << points_attr(graph.lane(id).centerline.points())
      << "\" fill=\"none\" stroke=\"" << kRouteColor << "\" stroke-width=\"0.8\" stroke-opacity=\"0.6\"/>\n";
  }
  for (const auto & ob : spec.obstacles) {
    if (ob.kind == ObstacleKind::Cone) {
      o << box_polygon(ob.box, "cone", kConeColor);
    } else {
      o << box_polygon(ob.box, "vehicle", kVehicleColor);
    }
  }
  if (snap) {
    for (const auto & a : snap->agents) {
      if (a.active) {
        o << box_polygon(a.box, "vehicle", kVehicleColor);
      }
    }
    for (const auto & p : snap->pedestrians) {
      o << box_polygon(p.box, "pedestrian", kPedestrianColor);
    }
    std::vector<Vec2> past;
    for (int k = 0; k <= at; ++k) {
      past.push_back(trace->snapshots[k].ego.box.center.position());
    }
    if (past.size() >= 2) {
      o << "<polyline class=\"past\" points=\"" << points_attr(past) << "\" fill=\"none\" stroke=\"" << kEgoColor
        << "\" stroke-width=\"0.4\" stroke-dasharray=\"1,1\"/>\n";
    }
    std::vector<Vec2> plan;
    for (const auto & s : snap->plan) {
      plan.push_back(s.pose.position());
    }
    if (plan.size() >= 2) {
      o << "<polyline class=\"plan\" points=\"" << points_attr(plan) << "\" fill=\"none\" stroke=\"" << kEgoColor
        << "\" stroke-width=\"0.4\"/>\n";
    }
  } else {
    for (const auto & a : spec.agents) {
      if (a.active) {
        o << box_polygon(a.box, "vehicle", kVehicleColor);
      }
    }
    for (const auto & p : spec.pedestrians) {
      o << box_polygon(p.box(), "pedestrian", kPedestrianColor);
    }
  }
  const OrientedBox ego = snap ? snap->ego.box : spec.ego_box();
  const auto c = ego.corners();
  o << "<polygon id=\"ego\" class=\"ego\" points=\"" << points_attr({c.begin(), c.end()}) << "\" fill=\"" << kEgoColor
    << "\" stroke=\"#333333\" stroke-width=\"0.1\"/>\n";
  o << "</g>\n</svg>\n";
  return o.str();
}

SuiteReport load_report(const fs::path & path)
{
  const fs::path file = fs::is_directory(path) ? path / "report.json" : path;
  std::ifstream in(file);
  if (!in) {
    throw std::runtime_error("cannot open report " + file.string());
  }
  try {
    return report_from_json(json::parse(in));
  } catch (const json::exception & e) {
    throw std::runtime_error("malformed report " + file.string() + ": " + e.what());
  }
}

std::string compare_reports(const std::vector<SuiteReport> & reports)
{
  return report_table_markdown(reports);
}

}  // namespace longtail
