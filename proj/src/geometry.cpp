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

#include "longtail/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace longtail
{

double normalize_angle(double angle)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a <= -std::numbers::pi) {
    a += two_pi;
  } else if (a > std::numbers::pi) {
    a -= two_pi;
  }
  return a;
}

OrientedBox::OrientedBox(const Pose2D & c, double length_, double width_)
: center(c), length(length_), width(width_)
{
  if (!(length > 0.0) || !(width > 0.0)) {
    throw std::invalid_argument("OrientedBox extents must be positive");
  }
}

std::array<Vec2, 4> OrientedBox::corners() const
{
  const Vec2 c = center.position();
  const Vec2 f = unit_from_heading(center.heading) * (0.5 * length);
  const Vec2 l = Vec2{-std::sin(center.heading), std::cos(center.heading)} * (0.5 * width);
  return {c + f + l, c - f + l, c - f - l, c + f - l};
}

bool OrientedBox::contains(const Vec2 & p, double tolerance) const
{
  const Vec2 r = p - center.position();
  const Vec2 f = unit_from_heading(center.heading);
  const double lon = dot(r, f);
  const double lat = cross(f, r);
  return std::abs(lon) <= 0.5 * length + tolerance && std::abs(lat) <= 0.5 * width + tolerance;
}

namespace
{

// Closed-interval overlap of both boxes projected on `axis`.
bool overlap_on_axis(
  const std::array<Vec2, 4> & a, const std::array<Vec2, 4> & b, const Vec2 & axis)
{
  double a_min = std::numeric_limits<double>::infinity();
  double a_max = -a_min;
  double b_min = a_min;
  double b_max = -a_min;
  for (const auto & p : a) {
    const double v = dot(p, axis);
    a_min = std::min(a_min, v);
    a_max = std::max(a_max, v);
  }
  for (const auto & p : b) {
    const double v = dot(p, axis);
    b_min = std::min(b_min, v);
    b_max = std::max(b_max, v);
  }
  return a_max >= b_min && b_max >= a_min;
}

}  // namespace

bool boxes_collide(const OrientedBox & a, const OrientedBox & b)
{
  // Bounding-circle reject first.
  const double ra = 0.5 * std::hypot(a.length, a.width);
  const double rb = 0.5 * std::hypot(b.length, b.width);
  if ((a.center.position() - b.center.position()).norm() > ra + rb) {
    return false;
  }
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Vec2, 4> axes{
    unit_from_heading(a.center.heading), unit_from_heading(a.center.heading + 0.5 * std::numbers::pi),
    unit_from_heading(b.center.heading), unit_from_heading(b.center.heading + 0.5 * std::numbers::pi)};
  for (const auto & axis : axes) {
    if (!overlap_on_axis(ca, cb, axis)) {
      return false;
    }
  }
  return true;
}

Polyline::Polyline(std::vector<Vec2> points) : points_(std::move(points))
{
  if (points_.size() < 2) {
    throw std::invalid_argument("Polyline needs at least two points");
  }
  cumulative_.reserve(points_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double step = (points_[i] - points_[i - 1]).norm();
    if (!(step > 0.0)) {
      throw std::invalid_argument("Polyline has repeated point at index " + std::to_string(i));
    }
    cumulative_.push_back(cumulative_.back() + step);
  }
}

std::size_t Polyline::segment_at(double s) const
{
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  if (it == cumulative_.begin()) {
    return 0;
  }
  const auto idx = static_cast<std::size_t>(std::distance(cumulative_.begin(), it)) - 1;
  return std::min(idx, segment_count() - 1);
}

double Polyline::heading_at(double s) const
{
  const std::size_t i = segment_at(s);
  const Vec2 t = points_[i + 1] - points_[i];
  return std::atan2(t.y, t.x);
}

Vec2 Polyline::point_at(double s) const
{
  const std::size_t i = segment_at(s);
  const double seg_len = cumulative_[i + 1] - cumulative_[i];
  const double u = (s - cumulative_[i]) / seg_len;
  return points_[i] + (points_[i + 1] - points_[i]) * u;
}

FrenetPoint project_to_centerline(const Vec2 & p, const Polyline & line)
{
  const auto & pts = line.points();
  const auto & cum = line.arclengths();
  double best_dist2 = std::numeric_limits<double>::infinity();
  FrenetPoint best;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Vec2 a = pts[i];
    const Vec2 ab = pts[i + 1] - a;
    const double seg_len2 = dot(ab, ab);
    const double u = std::clamp(dot(p - a, ab) / seg_len2, 0.0, 1.0);
    const Vec2 q = a + ab * u;
    const Vec2 r = p - q;
    const double dist2 = dot(r, r);
    if (dist2 < best_dist2) {
      best_dist2 = dist2;
      const double side = cross(ab, r);
      const double dist = std::sqrt(dist2);
      best.s = cum[i] + u * (cum[i + 1] - cum[i]);
      best.d = side >= 0.0 ? dist : -dist;
    }
  }
  best.s = std::clamp(best.s, 0.0, line.length());
  return best;
}

Pose2D frenet_to_cartesian(const FrenetPoint & f, const Polyline & line)
{
  if (f.s < 0.0 || f.s > line.length()) {
    throw std::out_of_range("frenet s outside centerline");
  }
  const double heading = line.heading_at(f.s);
  const Vec2 q = line.point_at(f.s);
  const Vec2 n{-std::sin(heading), std::cos(heading)};
  const Vec2 p = q + n * f.d;
  return {p.x, p.y, heading};
}

bool point_in_polygon(const Vec2 & p, const Polygon & polygon)
{
  // Crossing-number test; points on edges may land either way, which the
  // grid sampler tolerates.
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 & a = polygon[i];
    const Vec2 & b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside;
}

bool point_in_any(const Vec2 & p, std::span<const Polygon> area)
{
  return std::any_of(area.begin(), area.end(), [&](const Polygon & poly) {
    return point_in_polygon(p, poly);
  });
}

double fraction_outside_drivable(
  const OrientedBox & box, std::span<const Polygon> area, int resolution)
{
  resolution = std::max(resolution, 1);
  const Vec2 c = box.center.position();
  const Vec2 f = unit_from_heading(box.center.heading);
  const Vec2 l{-f.y, f.x};
  int outside = 0;
  for (int i = 0; i < resolution; ++i) {
    const double lon = ((i + 0.5) / resolution - 0.5) * box.length;
    for (int j = 0; j < resolution; ++j) {
      const double lat = ((j + 0.5) / resolution - 0.5) * box.width;
      if (!point_in_any(c + f * lon + l * lat, area)) {
        ++outside;
      }
    }
  }
  return static_cast<double>(outside) / static_cast<double>(resolution * resolution);
}

}  // namespace longtail
