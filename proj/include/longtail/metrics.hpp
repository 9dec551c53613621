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

#ifndef LONGTAIL__METRICS_HPP_
#define LONGTAIL__METRICS_HPP_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "longtail/scenario.hpp"
#include "longtail/simulation.hpp"

namespace longtail
{

struct MetricWeights
{
  double progress{5.0};
  double ttc{5.0};
  double speed_limit{4.0};
  double comfort{2.0};
  double lane_change{5.0};  // applied only to lane-change scenarios
};

struct ComfortBounds
{
  double min_lon_accel{-4.05};  // m/s^2
  double max_lon_accel{2.40};   // m/s^2
  double max_lat_accel{4.89};   // m/s^2
  double max_lon_jerk{4.13};    // m/s^3
  double max_jerk{8.37};        // m/s^3, magnitude of the planar jerk
  double max_yaw_rate{0.95};    // rad/s
  double max_yaw_accel{1.93};   // rad/s^2
};

struct MetricConfig
{
  MetricWeights weights;
  ComfortBounds comfort;
  double ttc_threshold{0.95};         // s
  double ttc_step{0.05};              // s
  double stationary_limit{10.0};      // s
  double stationary_clearance{10.0};  // m ahead that justifies a stop
  double direction_full{2.0};         // m of wrong-way driving still scored 1
  double direction_half{6.0};         // m still scored 0.5
  double offroad_tolerance{kOffroadTolerance};
  int smoothing_window{5};            // ticks, centered moving average
  double lane_hold_time{1.0};         // s
  double min_progress_margin{2.0};    // m past the far end of the obstacles

  /// Throws std::invalid_argument.
  void validate() const;
};

/// Partial JSON objects override defaults; unknown keys are rejected.
MetricConfig metric_config_from_json(const nlohmann::json & j);
nlohmann::json metric_config_to_json(const MetricConfig & cfg);
MetricConfig load_metric_config(const std::filesystem::path & path);

struct CollisionResult
{
  double multiplier{1.0};
  int ego_contacts{0};
  int at_fault_contacts{0};
};

CollisionResult collision_metric(const SimTrace & trace);
double drivable_area_metric(const SimTrace & trace, const ScenarioSpec & spec, const MetricConfig & cfg = {});
/// Distance driven with the center in an opposing lane only.
double wrong_way_distance(const SimTrace & trace, const ScenarioSpec & spec);
double driving_direction_metric(
  const SimTrace & trace, const ScenarioSpec & spec, ScenarioType type, const MetricConfig & cfg = {});
double stationary_metric(const SimTrace & trace, const ScenarioSpec & spec, const MetricConfig & cfg = {});
double ttc_metric(const SimTrace & trace, const ScenarioSpec & spec, const MetricConfig & cfg = {});

struct ComfortSignals
{
  std::vector<double> lon_accel;
  std::vector<double> lat_accel;
  std::vector<double> lon_jerk;
  std::vector<double> jerk;
  std::vector<double> yaw_rate;
  std::vector<double> yaw_accel;
};

ComfortSignals comfort_signals(const SimTrace & trace, int smoothing_window);
double comfort_metric(const SimTrace & trace, const MetricConfig & cfg = {});
double speed_limit_metric(const SimTrace & trace, const ScenarioSpec & spec);

/// Ego displacement along the route-preferred lane tangent, summed per tick.
double route_progress(const SimTrace & trace, const ScenarioSpec & spec);
/// Progress of the IDM planner on the scenario with obstacles and
/// pedestrians removed.
double reference_progress(const ScenarioSpec & spec);
double progress_metric(const SimTrace & trace, const ScenarioSpec & spec, double reference);

double lane_change_completion(const SimTrace & trace, const ScenarioSpec & spec, const MetricConfig & cfg = {});
double min_progress_multiplier(const SimTrace & trace, const ScenarioSpec & spec, const MetricConfig & cfg = {});

struct ScoreComponents
{
  double progress{1.0};
  double ttc{1.0};
  double speed_limit{1.0};
  double comfort{1.0};
  double lane_change{1.0};
};

struct ScoreMultipliers
{
  double collision{1.0};
  double drivable{1.0};
  double direction{1.0};
  double stationary{1.0};
  double min_progress{1.0};
};

struct ScenarioScore
{
  std::string scenario;
  ScenarioType type{ScenarioType::Construction};
  ScoreComponents components;
  ScoreMultipliers multipliers;
  double score{0.0};
};

/// Weighted average of components times the product of multipliers; the
/// direction multiplier is ignored for Overtake and Accident.
ScenarioScore aggregate_score(
  const ScoreComponents & c, const ScoreMultipliers & m, const MetricConfig & cfg, ScenarioType type);

/// All metrics for one run. The reference progress is computed when absent.
ScenarioScore score_scenario(
  const SimTrace & trace, const ScenarioSpec & spec, const MetricConfig & cfg = {},
  std::optional<double> reference = std::nullopt);

struct SuiteReport
{
  std::string planner;
  /// Mean score per type in kAllScenarioTypes order; empty types are absent.
  std::array<std::optional<double>, kAllScenarioTypes.size()> per_type;
  double overall{0.0};
  /// Lane-change scenarios only, as fractions.
  std::optional<double> drivable;
  std::optional<double> goal;
  std::optional<double> no_collision;
  int scenario_count{0};
};

SuiteReport suite_report(const std::string & planner, const std::vector<ScenarioScore> & scores);

std::string scores_csv(const std::vector<ScenarioScore> & scores);
std::vector<ScenarioScore> parse_scores_csv(const std::string & text);

/// Leaderboard header plus one row per report; values x100, rounded.
std::string report_table_markdown(const std::vector<SuiteReport> & reports);
nlohmann::json report_to_json(const SuiteReport & report);
SuiteReport report_from_json(const nlohmann::json & j);

}  // namespace longtail

#endif  // LONGTAIL__METRICS_HPP_
