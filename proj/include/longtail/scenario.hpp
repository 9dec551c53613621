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

#ifndef LONGTAIL__SCENARIO_HPP_
#define LONGTAIL__SCENARIO_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "longtail/actors.hpp"
#include "longtail/lane_graph.hpp"
#include "longtail/rng.hpp"

namespace longtail
{

enum class ScenarioType {
  Construction,
  Accident,
  Jaywalker,
  Nudge,
  Overtake,
  LaneChangeLTD,
  LaneChangeMTD,
  LaneChangeHTD,
};

inline constexpr std::array<ScenarioType, 8> kAllScenarioTypes{
  ScenarioType::Construction, ScenarioType::Accident,      ScenarioType::Jaywalker,
  ScenarioType::Nudge,        ScenarioType::Overtake,      ScenarioType::LaneChangeLTD,
  ScenarioType::LaneChangeMTD, ScenarioType::LaneChangeHTD};

std::string_view to_string(ScenarioType type);
/// Accepts the canonical names ("construction", "lane_change_htd", ...) and
/// the short report labels ("Constr.", "HTD", ...), case-insensitively.
ScenarioType scenario_type_from_string(std::string_view name);
bool is_lane_change(ScenarioType type);

struct TrafficDensity
{
  enum class Label { LTD, MTD, HTD };
  Label label{Label::LTD};
  double max_gap{100.0};

  static TrafficDensity of(Label label);
  static constexpr double kMinGap = 8.0;
};

enum class PolicyMode { Conservative, Assertive, Mixed };

std::string_view to_string(PolicyMode mode);

enum class MapKind { StraightMultilane, Curved, TwoWay };

class ScenarioError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct EgoStart
{
  Pose2D pose;
  double speed{0.0};

  bool operator==(const EgoStart &) const = default;
};

struct ScenarioSpec
{
  std::string name;
  ScenarioType type{ScenarioType::Construction};
  std::shared_ptr<const LaneGraph> graph;
  EgoStart ego;
  std::vector<AgentState> agents;
  std::vector<PedestrianState> pedestrians;
  std::vector<ObstacleSpec> obstacles;
  Route route;
  double duration{15.0};
  std::uint64_t seed{0};

  OrientedBox ego_box() const { return OrientedBox(ego.pose, kCarLength, kCarWidth); }
  const LaneSegment & ego_lane() const { return graph->lane(route.lane_sequence.front()); }

  bool operator==(const ScenarioSpec & o) const;
};

/// Throws ScenarioError when an invariant is broken. Obstacles may overlap
/// each other (crashed vehicles do by construction); nothing else may.
void validate_scenario(const ScenarioSpec & spec);

/// Parallel lanes are "L0" (rightmost) .. "L<n-1>"; the two-way variant adds
/// one opposing lane "O0" left of the leftmost forward lane. Curved maps turn
/// left with `radius` measured at L0.
LaneGraph build_base_map(
  MapKind kind, int lanes, double lane_width, double length, double speed_limit = 13.4,
  double radius = 200.0);

/// Scenario with only a map, an ego on `ego_lane` and a single-lane route.
ScenarioSpec make_base_scenario(
  std::string name, ScenarioType type, std::shared_ptr<const LaneGraph> graph,
  const LaneId & ego_lane, double ego_s, double ego_speed, std::uint64_t seed,
  double duration = 15.0);

/// Ego arclength on its start lane (box center).
double ego_lane_s(const ScenarioSpec & spec);

ScenarioSpec place_construction_zone(ScenarioSpec spec, double start_s, double zone_length);

enum class ParkedVariant { Nudge, Overtake };

/// `encroachment` is how far the nudge vehicle reaches into the lane from the
/// right edge; ignored for the overtake variant.
ScenarioSpec place_parked_vehicle(
  ScenarioSpec spec, ParkedVariant variant, double at_s, double encroachment = 1.3);

enum class AccidentPattern { RearEnd, Crossing };

ScenarioSpec place_accident_site(ScenarioSpec spec, double at_s, AccidentPattern pattern);

/// Deceleration assumed when checking that a jaywalker leaves time to react.
inline constexpr double kReactionBrake = 4.0;

ScenarioSpec place_jaywalker(
  ScenarioSpec spec, double bus_stop_s, double trigger_distance = 30.0, double walk_speed = 1.5);

/// Spawn window per lane, in meters along the ego's driving direction
/// relative to the ego's projection onto that lane.
struct SpawnRegion
{
  double behind{-80.0};
  double ahead{250.0};
  std::vector<LaneId> lanes;  // empty: every lane
};

ScenarioSpec spawn_traffic(
  ScenarioSpec spec, const TrafficDensity & density, Rng & rng, const SpawnRegion & region = {});

ScenarioSpec assign_policies(
  ScenarioSpec spec, PolicyMode mode, Rng & rng, double assertive_probability = 0.5);

ScenarioSpec augment_goal_for_lane_changes(ScenarioSpec spec, int n_changes);

/// 10 scenarios per type, ordered by type then index.
std::vector<ScenarioSpec> generate_benchmark_suite(std::uint64_t master_seed);

}  // namespace longtail

#endif  // LONGTAIL__SCENARIO_HPP_
