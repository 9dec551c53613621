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

#include "longtail/lane_graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <tuple>

namespace longtail
{

LaneGraph::LaneGraph(std::vector<LaneSegment> segments, std::vector<Polygon> drivable_area)
: drivable_area_(std::move(drivable_area))
{
  for (auto & seg : segments) {
    if (seg.id.empty()) {
      throw GraphError("lane with empty id");
    }
    if (!(seg.width > 0.0)) {
      throw GraphError("lane " + seg.id + " has non-positive width");
    }
    const LaneId id = seg.id;
    if (!segments_.emplace(id, std::move(seg)).second) {
      throw GraphError("duplicate lane id " + id);
    }
  }
  for (const auto & [id, seg] : segments_) {
    for (const auto & succ : seg.successors) {
      if (succ == id) {
        throw GraphError("lane " + id + " lists itself as successor");
      }
      if (!contains(succ)) {
        throw GraphError("lane " + id + " references unknown successor " + succ);
      }
    }
    if (seg.left_neighbor) {
      if (*seg.left_neighbor == id || !contains(*seg.left_neighbor)) {
        throw GraphError("lane " + id + " has invalid left neighbor");
      }
      if (segments_.at(*seg.left_neighbor).right_neighbor != id) {
        throw GraphError("asymmetric neighbor link " + id + " <-> " + *seg.left_neighbor);
      }
    }
    if (seg.right_neighbor) {
      if (*seg.right_neighbor == id || !contains(*seg.right_neighbor)) {
        throw GraphError("lane " + id + " has invalid right neighbor");
      }
      if (segments_.at(*seg.right_neighbor).left_neighbor != id) {
        throw GraphError("asymmetric neighbor link " + id + " <-> " + *seg.right_neighbor);
      }
    }
  }
}

const LaneSegment & LaneGraph::lane(const LaneId & id) const
{
  const auto it = segments_.find(id);
  if (it == segments_.end()) {
    throw GraphError("unknown lane " + id);
  }
  return it->second;
}

std::vector<LanePosition> LaneGraph::lanes_containing(const Vec2 & p) const
{
  std::vector<LanePosition> out;
  for (const auto & [id, seg] : segments_) {
    const FrenetPoint f = project_to_centerline(p, seg.centerline);
    if (std::abs(f.d) > 0.5 * seg.width) {
      continue;
    }
    // Beyond the ends the clamped projection is not inside the corridor.
    const double len = seg.centerline.length();
    if (f.s <= 1e-9 || f.s >= len - 1e-9) {
      const Vec2 q = seg.centerline.point_at(f.s);
      const double along = dot(p - q, unit_from_heading(seg.centerline.heading_at(f.s)));
      if ((f.s <= 1e-9 && along < -1e-9) || (f.s >= len - 1e-9 && along > 1e-9)) {
        continue;
      }
    }
    out.push_back({id, f, seg.centerline.heading_at(f.s)});
  }
  std::stable_sort(out.begin(), out.end(), [](const LanePosition & a, const LanePosition & b) {
    return std::abs(a.frenet.d) < std::abs(b.frenet.d);
  });
  return out;
}

LanePosition LaneGraph::locate(const Pose2D & pose) const
{
  // (outside corridor, opposite direction, |d|, id)
  using Key = std::tuple<bool, bool, double, LaneId>;
  std::optional<Key> best_key;
  LanePosition best;
  for (const auto & [id, seg] : segments_) {
    const FrenetPoint f = project_to_centerline(pose.position(), seg.centerline);
    const double h = seg.centerline.heading_at(f.s);
    const bool outside = std::abs(f.d) > 0.5 * seg.width;
    const bool opposite = std::cos(pose.heading - h) < 0.0;
    Key key{outside, opposite, std::abs(f.d), id};
    if (!best_key || key < *best_key) {
      best_key = key;
      best = {id, f, h};
    }
  }
  if (!best_key) {
    throw GraphError("locate on empty graph");
  }
  return best;
}

Polygon lane_corridor_polygon(const LaneSegment & lane)
{
  const auto & pts = lane.centerline.points();
  const double half = 0.5 * lane.width;
  std::vector<Vec2> left;
  std::vector<Vec2> right;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Vec2 t;
    if (i == 0) {
      t = pts[1] - pts[0];
    } else if (i + 1 == pts.size()) {
      t = pts[i] - pts[i - 1];
    } else {
      const Vec2 a = pts[i] - pts[i - 1];
      const Vec2 b = pts[i + 1] - pts[i];
      t = a * (1.0 / a.norm()) + b * (1.0 / b.norm());
    }
    t = t * (1.0 / t.norm());
    const Vec2 n{-t.y, t.x};
    // Miter scaling keeps the boundary at exactly half-width from both segments.
    double scale = 1.0;
    if (i > 0 && i + 1 < pts.size()) {
      const Vec2 a = pts[i] - pts[i - 1];
      const Vec2 an = Vec2{-a.y, a.x} * (1.0 / a.norm());
      scale = 1.0 / std::max(dot(an, n), 0.2);
    }
    left.push_back(pts[i] + n * (half * scale));
    right.push_back(pts[i] - n * (half * scale));
  }
  Polygon poly = left;
  poly.insert(poly.end(), right.rbegin(), right.rend());
  return poly;
}

bool is_neighbor_hop(const LaneGraph & graph, const LaneId & from, const LaneId & to)
{
  const auto & seg = graph.lane(from);
  return seg.left_neighbor == to || seg.right_neighbor == to;
}

namespace
{

bool is_successor(const LaneGraph & graph, const LaneId & from, const LaneId & to)
{
  const auto & succ = graph.lane(from).successors;
  return std::find(succ.begin(), succ.end(), to) != succ.end();
}

}  // namespace

Route shortest_route(
  const LaneGraph & graph, const LaneId & start_lane, const LaneId & goal_lane,
  const Pose2D & goal_pose)
{
  graph.lane(start_lane);
  graph.lane(goal_lane);

  // Dijkstra on (lane changes, hops, sequence); the sequence component is
  // order-preserving under extension for equal (changes, hops).
  using Label = std::tuple<int, int, std::vector<LaneId>>;
  std::priority_queue<Label, std::vector<Label>, std::greater<>> queue;
  std::set<LaneId> settled;
  queue.push({0, 0, {start_lane}});
  while (!queue.empty()) {
    auto [changes, hops, seq] = queue.top();
    queue.pop();
    const LaneId & here = seq.back();
    if (!settled.insert(here).second) {
      continue;
    }
    if (here == goal_lane) {
      return Route{seq, goal_pose};
    }
    const auto & seg = graph.lane(here);
    auto push = [&](const LaneId & next, int extra) {
      if (settled.count(next)) {
        return;
      }
      auto next_seq = seq;
      next_seq.push_back(next);
      queue.push({changes + extra, hops + 1, std::move(next_seq)});
    };
    for (const auto & succ : seg.successors) {
      push(succ, 0);
    }
    if (seg.left_neighbor) {
      push(*seg.left_neighbor, 1);
    }
    if (seg.right_neighbor) {
      push(*seg.right_neighbor, 1);
    }
  }
  throw NoRoute("no route from " + start_lane + " to " + goal_lane);
}

int lane_changes_required(const LaneGraph & graph, const Route & route)
{
  int changes = 0;
  for (std::size_t i = 1; i < route.lane_sequence.size(); ++i) {
    const auto & a = route.lane_sequence[i - 1];
    const auto & b = route.lane_sequence[i];
    if (!is_successor(graph, a, b) && is_neighbor_hop(graph, a, b)) {
      ++changes;
    }
  }
  return changes;
}

void validate_route(const LaneGraph & graph, const Route & route)
{
  if (route.lane_sequence.empty()) {
    throw GraphError("empty route");
  }
  for (const auto & id : route.lane_sequence) {
    graph.lane(id);
  }
  for (std::size_t i = 1; i < route.lane_sequence.size(); ++i) {
    const auto & a = route.lane_sequence[i - 1];
    const auto & b = route.lane_sequence[i];
    if (!is_successor(graph, a, b) && !is_neighbor_hop(graph, a, b)) {
      throw GraphError("route lanes " + a + " and " + b + " are not connected");
    }
  }
  const auto & last = graph.lane(route.lane_sequence.back());
  const FrenetPoint f = project_to_centerline(route.goal_pose.position(), last.centerline);
  if (std::abs(f.d) > 0.5 * last.width + 1e-9) {
    throw GraphError("goal pose is not on the last route lane");
  }
}

Polyline reference_path(
  const LaneGraph & graph, const LaneId & lane, const Route * route, double min_length)
{
  std::vector<Vec2> pts = graph.lane(lane).centerline.points();
  double length = graph.lane(lane).centerline.length();
  LaneId current = lane;
  std::set<LaneId> visited{lane};
  while (length < min_length) {
    const auto & succ = graph.lane(current).successors;
    if (succ.empty()) {
      break;
    }
    LaneId next = succ.front();
    if (route) {
      for (const auto & s : succ) {
        const auto & seq = route->lane_sequence;
        if (std::find(seq.begin(), seq.end(), s) != seq.end()) {
          next = s;
          break;
        }
      }
    }
    if (!visited.insert(next).second) {
      break;
    }
    const auto & next_pts = graph.lane(next).centerline.points();
    for (std::size_t i = 0; i < next_pts.size(); ++i) {
      if ((next_pts[i] - pts.back()).norm() > 1e-9) {
        pts.push_back(next_pts[i]);
      }
    }
    length += graph.lane(next).centerline.length();
    current = next;
  }
  if (length < min_length) {
    const Vec2 a = pts[pts.size() - 2];
    const Vec2 b = pts.back();
    const Vec2 dir = (b - a) * (1.0 / (b - a).norm());
    pts.push_back(b + dir * (min_length - length + 1.0));
  }
  return Polyline(std::move(pts));
}

}  // namespace longtail
