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

#include "longtail/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "longtail/agents.hpp"

namespace longtail
{

namespace
{

std::string lower(std::string_view text)
{
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string_view short_label(ScenarioType type)
{
  switch (type) {
    case ScenarioType::Construction:
      return "constr.";
    case ScenarioType::Accident:
      return "acc.";
    case ScenarioType::Jaywalker:
      return "jayw.";
    case ScenarioType::Nudge:
      return "nudge";
    case ScenarioType::Overtake:
      return "overt.";
    case ScenarioType::LaneChangeLTD:
      return "ltd";
    case ScenarioType::LaneChangeMTD:
      return "mtd";
    case ScenarioType::LaneChangeHTD:
      return "htd";
  }
  return "";
}

}  // namespace

std::string_view to_string(ScenarioType type)
{
  switch (type) {
    case ScenarioType::Construction:
      return "construction";
    case ScenarioType::Accident:
      return "accident";
    case ScenarioType::Jaywalker:
      return "jaywalker";
    case ScenarioType::Nudge:
      return "nudge";
    case ScenarioType::Overtake:
      return "overtake";
    case ScenarioType::LaneChangeLTD:
      return "lane_change_ltd";
    case ScenarioType::LaneChangeMTD:
      return "lane_change_mtd";
    case ScenarioType::LaneChangeHTD:
      return "lane_change_htd";
  }
  return "";
}

ScenarioType scenario_type_from_string(std::string_view name)
{
  const std::string key = lower(name);
  for (auto t : kAllScenarioTypes) {
    if (key == to_string(t) || key == short_label(t) ||
        (key.size() > 1 && key.back() != '.' && key + "." == short_label(t))) {
      return t;
    }
  }
  throw std::invalid_argument("unknown scenario type '" + std::string(name) + "'");
}

bool is_lane_change(ScenarioType type)
{
  return type == ScenarioType::LaneChangeLTD || type == ScenarioType::LaneChangeMTD ||
         type == ScenarioType::LaneChangeHTD;
}

TrafficDensity TrafficDensity::of(Label label)
{
  switch (label) {
    case Label::LTD:
      return {label, 100.0};
    case Label::MTD:
      return {label, 50.0};
    case Label::HTD:
      return {label, 33.0};
  }
  return {label, 100.0};
}

std::string_view to_string(PolicyMode mode)
{
  switch (mode) {
    case PolicyMode::Conservative:
      return "conservative";
    case PolicyMode::Assertive:
      return "assertive";
    case PolicyMode::Mixed:
      return "mixed";
  }
  return "";
}

bool ScenarioSpec::operator==(const ScenarioSpec & o) const
{
  const bool graphs_equal = (graph == o.graph) || (graph && o.graph && *graph == *o.graph);
  return name == o.name && type == o.type && graphs_equal && ego == o.ego && agents == o.agents &&
         pedestrians == o.pedestrians && obstacles == o.obstacles && route == o.route &&
         duration == o.duration && seed == o.seed;
}

void validate_scenario(const ScenarioSpec & spec)
{
  if (!spec.graph) {
    throw ScenarioError(spec.name + ": missing map");
  }
  if (!(spec.duration > 0.0)) {
    throw ScenarioError(spec.name + ": duration must be positive");
  }
  try {
    validate_route(*spec.graph, spec.route);
  } catch (const GraphError & e) {
    throw ScenarioError(spec.name + ": " + e.what());
  }
  const auto & first = spec.ego_lane();
  const FrenetPoint ef = project_to_centerline(spec.ego.pose.position(), first.centerline);
  if (std::abs(ef.d) > 0.5 * first.width) {
    throw ScenarioError(spec.name + ": ego does not start on the first route lane");
  }
  struct Item
  {
    std::string label;
    OrientedBox box;
    bool obstacle;
  };
  std::vector<Item> items;
  items.push_back({"ego", spec.ego_box(), false});
  for (const auto & a : spec.agents) {
    items.push_back({"agent " + std::to_string(a.id), a.box, false});
  }
  for (const auto & p : spec.pedestrians) {
    items.push_back({"pedestrian " + std::to_string(p.id), p.box(), false});
  }
  for (std::size_t i = 0; i < spec.obstacles.size(); ++i) {
    items.push_back({"obstacle " + std::to_string(i), spec.obstacles[i].box, true});
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (items[i].obstacle && items[j].obstacle) {
        continue;
      }
      if (boxes_collide(items[i].box, items[j].box)) {
        throw ScenarioError(
          spec.name + ": initial overlap between " + items[i].label + " and " + items[j].label);
      }
    }
  }
  for (const auto & o : spec.obstacles) {
    const auto & lane = spec.graph->lane(o.lane);
    const LaneFootprint fp = footprint_on(o.box, lane.centerline);
    if (fp.d_max < -0.5 * lane.width || fp.d_min > 0.5 * lane.width) {
      throw ScenarioError(spec.name + ": obstacle does not overlap its lane " + o.lane);
    }
  }
}

LaneGraph build_base_map(
  MapKind kind, int lanes, double lane_width, double length, double speed_limit, double radius)
{
  if (lanes < 1 || !(lane_width > 0.0) || !(length > 0.0) || !(speed_limit > 0.0)) {
    throw std::invalid_argument("map dimensions must be positive");
  }
  if (length < 200.0) {
    throw std::invalid_argument("map length must be at least 200 m");
  }
  if (kind == MapKind::Curved && !(radius - (lanes - 0.5) * lane_width > 0.0)) {
    throw std::invalid_argument("curve radius too small for the lane count");
  }
  std::vector<LaneSegment> segments;
  for (int i = 0; i < lanes; ++i) {
    LaneSegment seg;
    seg.id = "L" + std::to_string(i);
    seg.width = lane_width;
    seg.speed_limit = speed_limit;
    const double offset = i * lane_width;
    if (kind == MapKind::Curved) {
      const double r = radius - offset;
      const double sweep = length / radius;
      const int n = std::max(2, static_cast<int>(std::ceil(sweep / 0.01)));
      std::vector<Vec2> pts;
      for (int k = 0; k <= n; ++k) {
        const double phi = sweep * k / n;
        pts.push_back({r * std::sin(phi), radius - r * std::cos(phi)});
      }
      seg.centerline = Polyline(std::move(pts));
    } else {
      seg.centerline = Polyline({{0.0, offset}, {length, offset}});
    }
    if (i + 1 < lanes) {
      seg.left_neighbor = "L" + std::to_string(i + 1);
    }
    if (i > 0) {
      seg.right_neighbor = "L" + std::to_string(i - 1);
    }
    segments.push_back(std::move(seg));
  }
  if (kind == MapKind::TwoWay) {
    LaneSegment seg;
    seg.id = "O0";
    seg.width = lane_width;
    seg.speed_limit = speed_limit;
    const double offset = lanes * lane_width;
    seg.centerline = Polyline({{length, offset}, {0.0, offset}});
    segments.push_back(std::move(seg));
  }
  std::vector<Polygon> area;
  for (const auto & seg : segments) {
    area.push_back(lane_corridor_polygon(seg));
  }
  return LaneGraph(std::move(segments), std::move(area));
}

ScenarioSpec make_base_scenario(
  std::string name, ScenarioType type, std::shared_ptr<const LaneGraph> graph,
  const LaneId & ego_lane, double ego_s, double ego_speed, std::uint64_t seed, double duration)
{
  ScenarioSpec spec;
  spec.name = std::move(name);
  spec.type = type;
  spec.graph = std::move(graph);
  const auto & lane = spec.graph->lane(ego_lane);
  spec.ego.pose = frenet_to_cartesian({ego_s, 0.0}, lane.centerline);
  spec.ego.speed = ego_speed;
  const double goal_s = lane.centerline.length() - 30.0;
  spec.route = Route{{ego_lane}, frenet_to_cartesian({goal_s, 0.0}, lane.centerline)};
  spec.duration = duration;
  spec.seed = seed;
  return spec;
}

double ego_lane_s(const ScenarioSpec & spec)
{
  return project_to_centerline(spec.ego.pose.position(), spec.ego_lane().centerline).s;
}

namespace
{

OrientedBox box_on_lane(const LaneSegment & lane, double s, double d, double length, double width,
                        double heading_offset = 0.0)
{
  Pose2D p = frenet_to_cartesian({s, d}, lane.centerline);
  return OrientedBox({p.x, p.y, p.heading + heading_offset}, length, width);
}

void require_ahead(const ScenarioSpec & spec, double rear_s, const char * what)
{
  const double ego_front = ego_lane_s(spec) + 0.5 * kCarLength;
  if (rear_s - ego_front < 30.0) {
    throw ScenarioError(
      spec.name + ": " + what + " must start at least 30 m ahead of the ego front bumper");
  }
}

bool has_opposing_lane(const LaneGraph & graph, const LaneSegment & lane)
{
  const double h = lane.centerline.heading_at(0.0);
  const Vec2 p = lane.centerline.points().front();
  for (const auto & [id, seg] : graph.segments()) {
    if (id == lane.id) {
      continue;
    }
    const FrenetPoint f = project_to_centerline(p, seg.centerline);
    if (std::cos(seg.centerline.heading_at(f.s) - h) < 0.0) {
      return true;
    }
  }
  return false;
}

}  // namespace

ScenarioSpec place_construction_zone(ScenarioSpec spec, double start_s, double zone_length)
{
  if (!(zone_length > 0.0)) {
    throw ScenarioError(spec.name + ": zone length must be positive");
  }
  const auto & lane = spec.ego_lane();
  require_ahead(spec, start_s - 0.25, "construction zone");
  if (start_s + zone_length > lane.centerline.length() - 1.0) {
    throw ScenarioError(spec.name + ": construction zone runs past the lane end");
  }
  constexpr double cone = 0.5;
  const double edge = 0.5 * lane.width - 0.5 * cone - 0.1;
  auto add = [&](double s, double d) {
    spec.obstacles.push_back({ObstacleKind::Cone, box_on_lane(lane, s, d, cone, cone), lane.id});
  };
  // Closed row across the lane, then both edges every 5 m.
  const int across = std::max(2, static_cast<int>(std::ceil(2.0 * edge / 0.7)));
  for (int i = 0; i <= across; ++i) {
    add(start_s, -edge + 2.0 * edge * i / across);
  }
  for (double s = start_s + 5.0; s <= start_s + zone_length + 1e-9; s += 5.0) {
    add(s, edge);
    add(s, -edge);
  }
  return spec;
}

ScenarioSpec place_parked_vehicle(
  ScenarioSpec spec, ParkedVariant variant, double at_s, double encroachment)
{
  const auto & lane = spec.ego_lane();
  require_ahead(spec, at_s - 0.5 * kCarLength, "parked vehicle");
  double d = 0.0;
  if (variant == ParkedVariant::Nudge) {
    if (!(encroachment > 0.0) || encroachment > 0.4 * lane.width + 1e-12) {
      throw ScenarioError(spec.name + ": nudge encroachment must be in (0, 40% of lane width]");
    }
    d = -0.5 * lane.width + encroachment - 0.5 * kCarWidth;
  } else {
    if (!has_opposing_lane(*spec.graph, lane)) {
      throw ScenarioError(spec.name + ": overtake placement needs an oncoming lane");
    }
    d = -0.1;
  }
  spec.obstacles.push_back(
    {ObstacleKind::ParkedVehicle, box_on_lane(lane, at_s, d, kCarLength, kCarWidth), lane.id});
  return spec;
}

ScenarioSpec place_accident_site(ScenarioSpec spec, double at_s, AccidentPattern pattern)
{
  const auto & lane = spec.ego_lane();
  if (spec.graph->segments().size() < 2) {
    throw ScenarioError(spec.name + ": accident sites need a multilane or two-way map");
  }
  require_ahead(spec, at_s - 0.5 * kCarLength, "accident site");
  spec.obstacles.push_back(
    {ObstacleKind::CrashedVehicle, box_on_lane(lane, at_s, 0.0, kCarLength, kCarWidth), lane.id});
  if (pattern == AccidentPattern::RearEnd) {
    const double overlap = 0.5;
    spec.obstacles.push_back({ObstacleKind::CrashedVehicle,
                              box_on_lane(lane, at_s + kCarLength - overlap, 0.0, kCarLength, kCarWidth),
                              lane.id});
  } else {
    // Second car came from the right and hit the first one's side.
    const double d = -(0.5 * kCarWidth + 0.5 * kCarLength - 0.5);
    spec.obstacles.push_back(
      {ObstacleKind::CrashedVehicle,
       box_on_lane(lane, at_s + 0.6, d, kCarLength, kCarWidth, 0.5 * std::numbers::pi), lane.id});
  }
  return spec;
}

ScenarioSpec place_jaywalker(
  ScenarioSpec spec, double bus_stop_s, double trigger_distance, double walk_speed)
{
  const double stopping = spec.ego.speed * spec.ego.speed / (2.0 * kReactionBrake);
  if (!(trigger_distance > stopping)) {
    char buf[160];
    std::snprintf(
      buf, sizeof(buf), ": trigger distance %.1f m does not exceed stopping distance %.1f m",
      trigger_distance, stopping);
    throw ScenarioError(spec.name + buf);
  }
  const auto & lane = spec.ego_lane();
  constexpr double bus_length = 12.0;
  constexpr double bus_width = 2.5;
  require_ahead(spec, bus_stop_s - 0.5 * bus_length, "bus stop");
  const double bus_d = -0.5 * lane.width - 0.5 * bus_width + 0.2;
  spec.obstacles.push_back({ObstacleKind::StoppedBus,
                            box_on_lane(lane, bus_stop_s, bus_d, bus_length, bus_width), lane.id});
  const double cross_s = bus_stop_s + 0.5 * bus_length + 1.0;
  const double far_side =
    0.5 * lane.width + (has_opposing_lane(*spec.graph, lane) ? lane.width : 0.0) + 1.0;
  const Pose2D from = frenet_to_cartesian({cross_s, bus_d}, lane.centerline);
  const Pose2D to = frenet_to_cartesian({cross_s, far_side}, lane.centerline);
  const int id = static_cast<int>(spec.pedestrians.size());
  spec.pedestrians.push_back(make_pedestrian(
    id, Polyline({from.position(), to.position()}), walk_speed, trigger_distance));
  return spec;
}

namespace
{

struct Occupied
{
  double rear;
  double front;
};

}  // namespace

ScenarioSpec spawn_traffic(
  ScenarioSpec spec, const TrafficDensity & density, Rng & rng, const SpawnRegion & region)
{
  const double min_gap = TrafficDensity::kMinGap;
  const double max_gap = density.max_gap;
  const OrientedBox ego_box = spec.ego_box();
  int next_id = 0;
  for (const auto & a : spec.agents) {
    next_id = std::max(next_id, a.id + 1);
  }
  for (const auto & [id, lane] : spec.graph->segments()) {
    if (!region.lanes.empty() &&
        std::find(region.lanes.begin(), region.lanes.end(), id) == region.lanes.end()) {
      continue;
    }
    const auto & line = lane.centerline;
    const double half = 0.5 * lane.width;
    const FrenetPoint ego_f = project_to_centerline(spec.ego.pose.position(), line);
    const bool same_dir = std::cos(line.heading_at(ego_f.s) - spec.ego.pose.heading) >= 0.0;
    double lo = same_dir ? ego_f.s + region.behind : ego_f.s - region.ahead;
    double hi = same_dir ? ego_f.s + region.ahead : ego_f.s - region.behind;
    lo = std::max(lo, 5.0);
    hi = std::min(hi, line.length() - 5.0);
    if (hi - lo < kCarLength) {
      continue;
    }

    std::vector<Occupied> fixed;
    auto add_fixed = [&](const OrientedBox & box) {
      const LaneFootprint fp = footprint_on(box, line);
      if (fp.d_max >= -half && fp.d_min <= half && fp.s_max > lo && fp.s_min < hi) {
        fixed.push_back({fp.s_min, fp.s_max});
      }
    };
    add_fixed(ego_box);
    for (const auto & o : spec.obstacles) {
      add_fixed(o.box);
    }
    for (const auto & p : spec.pedestrians) {
      add_fixed(p.box());
    }
    for (const auto & a : spec.agents) {
      add_fixed(a.box);
    }
    std::sort(fixed.begin(), fixed.end(), [](const Occupied & a, const Occupied & b) {
      return a.rear < b.rear;
    });

    std::vector<double> centers;
    double cursor = lo;
    bool left_fixed = false;
    auto fill = [&](double right, bool right_fixed) {
      while (true) {
        const double remaining = right - cursor;
        double gap;
        if (right_fixed) {
          if (remaining <= max_gap) {
            return;
          }
          gap = rng.uniform(min_gap, max_gap);
          gap = std::min(gap, remaining - kCarLength - min_gap);
          if (!left_fixed && centers.empty()) {
            gap = std::min(rng.uniform(0.0, max_gap), remaining - kCarLength - min_gap);
          }
        } else {
          gap = (!left_fixed && centers.empty()) ? rng.uniform(0.0, max_gap)
                                                 : rng.uniform(min_gap, max_gap);
          if (cursor + gap + kCarLength > right) {
            return;
          }
        }
        const double rear = cursor + gap;
        centers.push_back(rear + 0.5 * kCarLength);
        cursor = rear + kCarLength;
        left_fixed = true;
      }
    };
    for (const auto & f : fixed) {
      if (f.front <= cursor) {
        cursor = std::max(cursor, f.front);
        left_fixed = true;
        continue;
      }
      if (f.rear > cursor) {
        fill(f.rear, true);
      }
      cursor = std::max(cursor, f.front);
      left_fixed = true;
    }
    fill(hi, false);

    // Speeds from the gap to whatever is next ahead on this lane.
    std::vector<Occupied> all = fixed;
    for (double c : centers) {
      all.push_back({c - 0.5 * kCarLength, c + 0.5 * kCarLength});
    }
    std::sort(all.begin(), all.end(), [](const Occupied & a, const Occupied & b) {
      return a.rear < b.rear;
    });
    const IdmParams params = IdmParams::for_speed_limit(lane.speed_limit);
    for (double c : centers) {
      const double front = c + 0.5 * kCarLength;
      double speed = lane.speed_limit;
      for (const auto & o : all) {
        if (o.rear >= front - 1e-9 && o.rear <= hi) {
          speed = std::min(speed, idm_equilibrium_speed(o.rear - front, params));
          break;
        }
      }
      spec.agents.push_back(
        make_agent(*spec.graph, next_id++, id, c, speed, AgentPolicy::Conservative, params));
    }
  }
  return spec;
}

ScenarioSpec assign_policies(
  ScenarioSpec spec, PolicyMode mode, Rng & rng, double assertive_probability)
{
  for (auto & a : spec.agents) {
    switch (mode) {
      case PolicyMode::Conservative:
        a.policy = AgentPolicy::Conservative;
        break;
      case PolicyMode::Assertive:
        a.policy = AgentPolicy::Assertive;
        break;
      case PolicyMode::Mixed:
        a.policy = rng.bernoulli(assertive_probability) ? AgentPolicy::Assertive
                                                        : AgentPolicy::Conservative;
        break;
    }
  }
  return spec;
}

ScenarioSpec augment_goal_for_lane_changes(ScenarioSpec spec, int n_changes)
{
  if (n_changes < 0) {
    throw ScenarioError(spec.name + ": negative lane-change count");
  }
  const LaneId start = spec.route.lane_sequence.front();
  auto walk = [&](bool left) -> std::optional<LaneId> {
    LaneId current = start;
    for (int i = 0; i < n_changes; ++i) {
      const auto & seg = spec.graph->lane(current);
      const auto & next = left ? seg.left_neighbor : seg.right_neighbor;
      if (!next) {
        return std::nullopt;
      }
      current = *next;
    }
    return current;
  };
  std::optional<LaneId> target = walk(true);
  if (!target) {
    target = walk(false);
  }
  if (!target) {
    throw ScenarioError(
      spec.name + ": map has too few parallel lanes for " + std::to_string(n_changes) +
      " lane changes");
  }
  const auto & goal_lane = spec.graph->lane(*target);
  const double goal_s = std::min(
    goal_lane.centerline.length() - 30.0,
    project_to_centerline(spec.ego.pose.position(), goal_lane.centerline).s + 250.0);
  const Pose2D goal = frenet_to_cartesian({goal_s, 0.0}, goal_lane.centerline);
  spec.route = shortest_route(*spec.graph, start, *target, goal);
  return spec;
}

namespace
{

constexpr double kUrbanLimit = 13.4;
constexpr double kArterialLimit = 15.0;
constexpr double kMapLength = 500.0;

std::string scenario_name(ScenarioType type, int index)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%02d", std::string(to_string(type)).c_str(), index);
  return buf;
}

std::shared_ptr<const LaneGraph> two_way_map(Rng & rng)
{
  return std::make_shared<const LaneGraph>(
    build_base_map(MapKind::TwoWay, 1, rng.uniform(3.5, 3.8), kMapLength, kUrbanLimit));
}

ScenarioSpec base(ScenarioType type, int index, std::shared_ptr<const LaneGraph> graph, Rng & rng,
                  double ego_speed)
{
  const double ego_s = rng.uniform(25.0, 45.0);
  return make_base_scenario(scenario_name(type, index), type, std::move(graph), "L0", ego_s,
                            ego_speed, rng.seed());
}

SpawnRegion oncoming_region()
{
  SpawnRegion r;
  r.lanes = {"O0"};
  r.behind = -40.0;
  r.ahead = 300.0;
  return r;
}

ScenarioSpec make_construction(int k, Rng & rng)
{
  auto graph = std::make_shared<const LaneGraph>(build_base_map(
    MapKind::StraightMultilane, 2, rng.uniform(3.4, 3.8), kMapLength, kUrbanLimit));
  auto spec = base(ScenarioType::Construction, k, graph, rng, rng.uniform(8.0, 11.0));
  const double ego_front = ego_lane_s(spec) + 0.5 * kCarLength;
  spec = place_construction_zone(spec, ego_front + rng.uniform(35.0, 70.0), rng.uniform(12.0, 30.0));
  if (k >= 5) {
    SpawnRegion r;
    r.lanes = {"L1"};
    r.behind = 60.0;
    r.ahead = 300.0;
    Rng traffic = rng.split("traffic");
    spec = spawn_traffic(spec, TrafficDensity::of(TrafficDensity::Label::LTD), traffic, r);
  }
  return spec;
}

ScenarioSpec make_accident(int k, Rng & rng)
{
  auto spec = base(ScenarioType::Accident, k, two_way_map(rng), rng, rng.uniform(8.0, 11.0));
  const double ego_front = ego_lane_s(spec) + 0.5 * kCarLength;
  const auto pattern = (k % 2 == 0) ? AccidentPattern::RearEnd : AccidentPattern::Crossing;
  spec = place_accident_site(spec, ego_front + rng.uniform(40.0, 70.0), pattern);
  if (k % 3 != 0) {
    Rng traffic = rng.split("traffic");
    spec = spawn_traffic(spec, TrafficDensity::of(TrafficDensity::Label::LTD), traffic, oncoming_region());
  }
  return spec;
}

ScenarioSpec make_jaywalker(int k, Rng & rng)
{
  auto spec = base(ScenarioType::Jaywalker, k, two_way_map(rng), rng, rng.uniform(8.0, 12.0));
  const double ego_front = ego_lane_s(spec) + 0.5 * kCarLength;
  spec = place_jaywalker(spec, ego_front + rng.uniform(50.0, 90.0), 30.0, rng.uniform(1.2, 1.8));
  if (k >= 6) {
    Rng traffic = rng.split("traffic");
    spec = spawn_traffic(spec, TrafficDensity::of(TrafficDensity::Label::LTD), traffic, oncoming_region());
  }
  return spec;
}

ScenarioSpec make_nudge(int k, Rng & rng)
{
  auto graph = std::make_shared<const LaneGraph>(
    build_base_map(MapKind::TwoWay, 1, rng.uniform(3.5, 3.8), kMapLength, kUrbanLimit));
  const double width = graph->lane("L0").width;
  auto spec = base(ScenarioType::Nudge, k, graph, rng, rng.uniform(8.0, 11.0));
  const double ego_front = ego_lane_s(spec) + 0.5 * kCarLength;
  const double encroachment = rng.uniform(0.9, std::min(1.4, 0.4 * width));
  spec = place_parked_vehicle(
    spec, ParkedVariant::Nudge, ego_front + rng.uniform(38.0, 70.0), encroachment);
  if (k >= 5) {
    Rng traffic = rng.split("traffic");
    spec = spawn_traffic(spec, TrafficDensity::of(TrafficDensity::Label::LTD), traffic, oncoming_region());
  }
  return spec;
}

ScenarioSpec make_overtake(int k, Rng & rng)
{
  auto spec = base(ScenarioType::Overtake, k, two_way_map(rng), rng, rng.uniform(8.0, 11.0));
  const double ego_front = ego_lane_s(spec) + 0.5 * kCarLength;
  spec = place_parked_vehicle(spec, ParkedVariant::Overtake, ego_front + rng.uniform(35.0, 60.0));
  // Index 0 is the easy instance without oncoming traffic.
  if (k > 0) {
    const auto label = k <= 5 ? TrafficDensity::Label::LTD : TrafficDensity::Label::MTD;
    Rng traffic = rng.split("traffic");
    spec = spawn_traffic(spec, TrafficDensity::of(label), traffic, oncoming_region());
  }
  return spec;
}

ScenarioSpec make_lane_change(ScenarioType type, int k, Rng & rng)
{
  TrafficDensity::Label label = TrafficDensity::Label::LTD;
  if (type == ScenarioType::LaneChangeMTD) {
    label = TrafficDensity::Label::MTD;
  } else if (type == ScenarioType::LaneChangeHTD) {
    label = TrafficDensity::Label::HTD;
  }
  const int changes = 1 + k % 3;
  const bool curved = (k == 9);
  const double width = rng.uniform(3.5, 3.8);
  auto graph = std::make_shared<const LaneGraph>(
    curved ? build_base_map(MapKind::Curved, 3, width, kMapLength, kArterialLimit, 400.0)
           : build_base_map(MapKind::StraightMultilane, 4, width, kMapLength, kArterialLimit));
  const double ego_s = rng.uniform(70.0, 90.0);
  auto spec = make_base_scenario(scenario_name(type, k), type, graph, "L0", ego_s,
                                 kArterialLimit, rng.seed());
  Rng traffic = rng.split("traffic");
  spec = spawn_traffic(spec, TrafficDensity::of(label), traffic);
  // Start the ego at the speed its own front gap allows, like the agents.
  const auto & lane = spec.ego_lane();
  const double ego_front = ego_s + 0.5 * kCarLength;
  double front_gap = 1e9;
  for (const auto & a : spec.agents) {
    if (a.lane == lane.id && a.s > ego_s) {
      front_gap = std::min(front_gap, a.s - 0.5 * a.length - ego_front);
    }
  }
  spec.ego.speed = std::min(
    spec.ego.speed, idm_equilibrium_speed(front_gap, IdmParams::for_speed_limit(lane.speed_limit)));
  PolicyMode mode = PolicyMode::Mixed;
  if (k < 3) {
    mode = PolicyMode::Conservative;
  } else if (k < 6) {
    mode = PolicyMode::Assertive;
  }
  Rng policy_rng = rng.split("policy");
  spec = assign_policies(spec, mode, policy_rng);
  return augment_goal_for_lane_changes(spec, changes);
}

}  // namespace

std::vector<ScenarioSpec> generate_benchmark_suite(std::uint64_t master_seed)
{
  const Rng root(master_seed);
  std::vector<ScenarioSpec> suite;
  suite.reserve(80);
  for (auto type : kAllScenarioTypes) {
    const Rng type_rng = root.split(to_string(type));
    for (int k = 0; k < 10; ++k) {
      Rng rng = type_rng.split(static_cast<std::uint64_t>(k));
      ScenarioSpec spec;
      switch (type) {
        case ScenarioType::Construction:
          spec = make_construction(k, rng);
          break;
        case ScenarioType::Accident:
          spec = make_accident(k, rng);
          break;
        case ScenarioType::Jaywalker:
          spec = make_jaywalker(k, rng);
          break;
        case ScenarioType::Nudge:
          spec = make_nudge(k, rng);
          break;
        case ScenarioType::Overtake:
          spec = make_overtake(k, rng);
          break;
        case ScenarioType::LaneChangeLTD:
        case ScenarioType::LaneChangeMTD:
        case ScenarioType::LaneChangeHTD:
          spec = make_lane_change(type, k, rng);
          break;
      }
      validate_scenario(spec);
      suite.push_back(std::move(spec));
    }
  }
  return suite;
}

}  // namespace longtail
