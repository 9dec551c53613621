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

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "longtail/bench.hpp"
#include "longtail/scenario_io.hpp"
#include "longtail/trace_io.hpp"

using namespace longtail;
namespace fs = std::filesystem;

namespace
{

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string & name)
{
  const fs::path p = fs::temp_directory_path() / ("longtail_bench_" + name);
  fs::remove_all(p);
  return p;
}

// Minimal XML well-formedness check: balanced tags and quoted attributes.
bool well_formed_xml(const std::string & doc)
{
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool root_seen = false;
  while ((i = doc.find('<', i)) != std::string::npos) {
    const std::size_t end = doc.find('>', i);
    if (end == std::string::npos) {
      return false;
    }
    std::string tag = doc.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.starts_with("?") || tag.starts_with("!--")) {
      continue;
    }
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) {
      return false;
    }
    if (tag.starts_with("/")) {
      if (stack.empty() || stack.back() != tag.substr(1)) {
        return false;
      }
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.ends_with("/");
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n/"));
    if (stack.empty() && root_seen) {
      return false;
    }
    root_seen = true;
    if (!self_closing) {
      stack.push_back(name);
    }
  }
  return root_seen && stack.empty();
}

int count(const std::string & text, const std::string & needle)
{
  int n = 0;
  for (std::size_t i = text.find(needle); i != std::string::npos; i = text.find(needle, i + 1)) {
    ++n;
  }
  return n;
}

std::string straight_reply(const PromptBundle &)
{
  std::string out = "Keep the lane.\n";
  for (int i = 1; i <= 16; ++i) {
    out += "(" + std::to_string(4.0 * i) + ", 0.0)\n";
  }
  return out;
}

}  // namespace

TEST_CASE("planner registry")
{
  const auto names = registered_planners();
  for (const char * n : {"idm", "idm_mobil", "sampling", "hybrid", "llm_waypoints"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
  const auto spec = generate_benchmark_suite(42)[0];
  CHECK_THROWS_AS(make_planner({"nope", {}}, spec), ConfigError);
  CHECK_THROWS_AS(make_planner({"idm", {{"bogus", "1"}}}, spec), ConfigError);
  CHECK_THROWS_AS(make_planner({"idm", {{"T", "abc"}}}, spec), ConfigError);
  CHECK_THROWS_AS(make_planner({"hybrid", {{"selector", "coin"}}}, spec), ConfigError);
  CHECK(make_planner({"idm", {{"T", "1.0"}}}, spec)->name() == "idm");
  CHECK(parse_param("eval_window=4") == std::pair<std::string, std::string>{"eval_window", "4"});
  CHECK_THROWS(parse_param("eval_window"));
  CHECK(PlannerSpec{"sampling", {{"eval_window", "4"}}}.label() == "sampling[eval_window=4]");

  RunConfig cfg;
  cfg.out = fresh_dir("validate");
  cfg.jobs = 0;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("scenario selection")
{
  const auto suite = generate_benchmark_suite(42);
  const auto nudge = select_scenarios(suite, {ScenarioType::Nudge}, {});
  CHECK(nudge.size() == 10);
  for (const auto & s : nudge) {
    CHECK(s.type == ScenarioType::Nudge);
  }
  CHECK(select_scenarios(suite, {ScenarioType::Construction, ScenarioType::Nudge}, {0, 3}).size() == 4);
  CHECK(select_scenarios(suite, {}, {}).size() == 80);
}

TEST_CASE("benchmark run artifacts and determinism")
{
  RunConfig cfg;
  cfg.planner = {"idm", {}};
  cfg.types = {ScenarioType::Nudge};
  cfg.out = fresh_dir("serial");
  const auto serial = run_benchmark(cfg);
  CHECK(serial.results.size() == 10);
  CHECK(serial.report.scenario_count == 10);
  int traces = 0;
  for (const auto & e : fs::directory_iterator(cfg.out / "traces")) {
    traces += e.path().extension() == ".json";
  }
  CHECK(traces == 10);
  for (const char * f : {"scores.csv", "hashes.txt", "report.md", "report.json"}) {
    CHECK(fs::exists(cfg.out / f));
  }

  RunConfig par = cfg;
  par.jobs = 4;
  par.out = fresh_dir("parallel");
  run_benchmark(par);
  CHECK(slurp(cfg.out / "scores.csv") == slurp(par.out / "scores.csv"));
  CHECK(slurp(cfg.out / "hashes.txt") == slurp(par.out / "hashes.txt"));

  const auto loaded = load_report(cfg.out);
  CHECK(loaded.overall == doctest::Approx(serial.report.overall));
  fs::remove_all(cfg.out);
  fs::remove_all(par.out);
}

TEST_CASE("llm-backed planners run offline")
{
  const auto suite = generate_benchmark_suite(42);
  const ChatClientFactory chat = [] { return std::make_shared<MockChatClient>(straight_reply); };
  SimTrace trace;
  const auto r = run_scenario(suite[30], {"llm_waypoints", {}}, {}, chat, &trace);
  CHECK(trace.snapshots.size() == 151);
  CHECK(r.fallbacks == 0);

  const ChatClientFactory picker = [] {
    return std::make_shared<MockChatClient>([](const PromptBundle &) { return std::string("follow_lane"); });
  };
  const auto h = run_scenario(suite[30], {"hybrid", {{"selector", "llm"}}}, {}, picker, &trace);
  CHECK(h.fallbacks == 0);
  CHECK(trace.snapshots[100].behavior == std::string("follow_lane"));
}

TEST_CASE("svg rendering")
{
  const auto suite = generate_benchmark_suite(42);
  const auto & construction = suite[0];
  const std::string svg = render_svg(construction);
  CHECK(well_formed_xml(svg));
  CHECK(count(svg, "class=\"cone\"") >= 4);
  CHECK(std::regex_search(svg, std::regex("id=\"ego\"[^>]*fill=\"#f28e2b\"")));

  SimTrace trace;
  run_scenario(construction, {"sampling", {}}, {}, {}, &trace);
  const std::string with_trace = render_svg(construction, &trace, 50);
  CHECK(well_formed_xml(with_trace));
  CHECK(with_trace.find("class=\"past\"") != std::string::npos);
  CHECK(with_trace.find("class=\"plan\"") != std::string::npos);
  CHECK_FALSE(well_formed_xml("<svg><g></svg>"));
}

TEST_CASE("report comparison")
{
  SuiteReport a;
  a.planner = "idm";
  a.overall = 0.5;
  SuiteReport b = a;
  b.planner = "sampling";
  const std::string two = compare_reports({a, b});
  CHECK(count(two, "\n") == 4);
  CHECK(two.find("| idm |") != std::string::npos);
  CHECK(two.find("| sampling |") != std::string::npos);
  const std::string none = compare_reports({});
  CHECK(count(none, "\n") == 2);
  CHECK(none.rfind("| Planner | Overall | Constr. |", 0) == 0);
}
