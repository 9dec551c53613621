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

// bench: run the long-tail suite, render scenes and compare reports.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "longtail/bench.hpp"
#include "longtail/scenario_io.hpp"
#include "longtail/trace_io.hpp"

namespace
{

std::vector<std::string> split_list(const std::vector<std::string> & items)
{
  std::vector<std::string> out;
  for (const auto & item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) {
        out.push_back(part);
      }
    }
  }
  return out;
}

void write_text(const std::string & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Closed-loop long-tail planning benchmark"};
  app.require_subcommand(1);

  longtail::RunConfig run_cfg;
  std::string out_dir;
  std::string metric_config;
  std::vector<std::string> types;
  std::vector<int> indices;
  std::vector<std::string> params;
  auto * run = app.add_subcommand("run", "Simulate and score a planner on the suite");
  run->add_option("--planner", run_cfg.planner.name, "Planner name")
    ->check(CLI::IsMember(longtail::registered_planners()))
    ->required();
  run->add_option("--suite-seed", run_cfg.master_seed, "Master seed of the generated suite")->default_val(42);
  run->add_option("--types", types, "Scenario types, comma separated (default: all)");
  run->add_option("--indices", indices, "Scenario indices 0-9 within each type (default: all)")
    ->delimiter(',');
  run->add_option("--jobs", run_cfg.jobs, "Worker threads")->default_val(1)->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--metric-config", metric_config, "JSON metric configuration")->check(CLI::ExistingFile);
  run->add_option("--planner-param", params, "Planner parameter k=v (repeatable)");
  run->add_flag("--cbor", run_cfg.cbor_traces, "Write traces as CBOR");

  std::string scenario_path;
  std::string trace_path;
  int tick = -1;
  std::string svg_out;
  auto * render = app.add_subcommand("render", "Draw a scenario or a trace snapshot as SVG");
  render->add_option("--scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  render->add_option("--trace", trace_path, "Trace file (JSON or CBOR)")->check(CLI::ExistingFile);
  render->add_option("--tick", tick, "Snapshot index (default: last)");
  render->add_option("--out", svg_out, "Output SVG")->required();

  std::vector<std::string> reports;
  std::string md_out;
  auto * compare = app.add_subcommand("compare", "Leaderboard of several run reports");
  compare->add_option("reports", reports, "report.json files or run directories")->required();
  compare->add_option("--out", md_out, "Output Markdown")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      for (const auto & t : split_list(types)) {
        run_cfg.types.push_back(longtail::scenario_type_from_string(t));
      }
      run_cfg.indices = indices;
      for (const auto & p : params) {
        run_cfg.planner.params.insert(longtail::parse_param(p));
      }
      run_cfg.out = out_dir;
      if (!metric_config.empty()) {
        run_cfg.metric_config = metric_config;
      }
      const auto result = longtail::run_benchmark(run_cfg);
      std::cout << longtail::compare_reports({result.report});
      int fallbacks = 0;
      for (const auto & r : result.results) {
        fallbacks += r.fallbacks;
      }
      std::cout << result.results.size() << " scenarios, " << fallbacks << " fallback plans, written to "
                << out_dir << "\n";
    } else if (*render) {
      const auto spec = longtail::load_scenario(scenario_path);
      std::optional<longtail::SimTrace> trace;
      if (!trace_path.empty()) {
        trace = longtail::load_trace(trace_path);
      }
      std::optional<int> at;
      if (tick >= 0) {
        at = tick;
      }
      write_text(svg_out, longtail::render_svg(spec, trace ? &*trace : nullptr, at));
    } else if (*compare) {
      std::vector<longtail::SuiteReport> loaded;
      for (const auto & r : reports) {
        loaded.push_back(longtail::load_report(r));
      }
      const std::string table = longtail::compare_reports(loaded);
      write_text(md_out, table);
      std::cout << table;
    }
  } catch (const std::exception & e) {
    std::cerr << "bench: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
