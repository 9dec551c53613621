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

#ifndef LONGTAIL__BENCH_HPP_
#define LONGTAIL__BENCH_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "longtail/llm.hpp"
#include "longtail/metrics.hpp"
#include "longtail/simulation.hpp"

namespace longtail
{

class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

struct PlannerSpec
{
  std::string name{"idm"};
  std::map<std::string, std::string> params;

  /// "name" or "name[k=v,...]"; used as the report row label.
  std::string label() const;
};

/// Names accepted by make_planner, in display order.
std::vector<std::string> registered_planners();

/// Parses "k=v"; throws ConfigError.
std::pair<std::string, std::string> parse_param(const std::string & text);

using ChatClientFactory = std::function<std::shared_ptr<ChatClient>()>;

/// Chat client built from LLM_ENDPOINT, LLM_MODEL and LLM_API_KEY.
ChatClientFactory environment_chat_client();

/// Fresh planner for one scenario. LLM planners call `chat` once; the
/// "hybrid" planner uses the scripted oracle unless selector=llm.
/// Throws ConfigError for unknown names or parameters.
std::unique_ptr<Planner> make_planner(
  const PlannerSpec & planner, const ScenarioSpec & spec, const ChatClientFactory & chat = {});

/// Model exchanges recorded by an LLM-backed planner, or nullptr.
const std::vector<LlmExchange> * planner_exchanges(const Planner & planner);

nlohmann::json exchanges_to_json(const std::vector<LlmExchange> & log);

struct RunConfig
{
  PlannerSpec planner;
  std::vector<ScenarioType> types;  // empty: all
  std::vector<int> indices;         // empty: all ten per type
  std::uint64_t master_seed{42};
  int jobs{1};
  std::filesystem::path out;
  std::optional<std::filesystem::path> metric_config;
  bool cbor_traces{false};

  void validate() const;
};

struct ScenarioResult
{
  ScenarioScore score;
  std::uint64_t trace_hash{0};
  int fallbacks{0};
};

struct BenchmarkResult
{
  SuiteReport report;
  std::vector<ScenarioResult> results;  // suite order
};

/// Subset of the suite selected by the type and index filters.
std::vector<ScenarioSpec> select_scenarios(
  const std::vector<ScenarioSpec> & suite, const std::vector<ScenarioType> & types,
  const std::vector<int> & indices);

/// Simulates and scores one scenario.
ScenarioResult run_scenario(
  const ScenarioSpec & spec, const PlannerSpec & planner, const MetricConfig & metrics,
  const ChatClientFactory & chat = {}, SimTrace * trace_out = nullptr);

/// Runs the selected scenarios on `jobs` worker threads. When `out` is set,
/// writes scenarios/, traces/, llm/ (LLM planners only), scores.csv,
/// hashes.txt, report.md and report.json beneath it.
BenchmarkResult run_benchmark(const RunConfig & cfg, const ChatClientFactory & chat = {});

std::string hashes_text(const std::vector<ScenarioSpec> & specs, const std::vector<ScenarioResult> & results);

/// Top-down drawing. Without a trace the initial state is drawn; with one,
/// the snapshot at `tick` (default: last) plus the past path and the plan.
std::string render_svg(
  const ScenarioSpec & spec, const SimTrace * trace = nullptr, std::optional<int> tick = std::nullopt);

/// Accepts report.json files or directories containing one.
SuiteReport load_report(const std::filesystem::path & path);
std::string compare_reports(const std::vector<SuiteReport> & reports);

}  // namespace longtail

#endif  // LONGTAIL__BENCH_HPP_
