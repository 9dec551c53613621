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

#ifndef LONGTAIL__GEOMETRY_HPP_
#define LONGTAIL__GEOMETRY_HPP_

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace longtail
{

struct Vec2
{
  double x{0.0};
  double y{0.0};

  constexpr Vec2 operator+(const Vec2 & o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2 & o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double k) const { return {x * k, y * k}; }
  constexpr bool operator==(const Vec2 &) const = default;

  double norm() const { return std::hypot(x, y); }
};

constexpr double dot(const Vec2 & a, const Vec2 & b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2 & a, const Vec2 & b) { return a.x * b.y - a.y * b.x; }
inline Vec2 unit_from_heading(double heading) { return {std::cos(heading), std::sin(heading)}; }

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

struct Pose2D
{
  double x{0.0};
  double y{0.0};
  double heading{0.0};

  Pose2D() = default;
  Pose2D(double x_, double y_, double heading_) : x(x_), y(y_), heading(normalize_angle(heading_)) {}

  Vec2 position() const { return {x, y}; }
  bool operator==(const Pose2D &) const = default;
};

/// Rectangle centered on `center`, long axis along the heading.
struct OrientedBox
{
  Pose2D center;
  double length{1.0};
  double width{1.0};

  OrientedBox() = default;
  OrientedBox(const Pose2D & c, double length_, double width_);

  /// Corners in counterclockwise order starting front-left.
  std::array<Vec2, 4> corners() const;
  bool contains(const Vec2 & p, double tolerance = 0.0) const;
  bool operator==(const OrientedBox &) const = default;
};

/// Touching boundaries count as a collision.
bool boxes_collide(const OrientedBox & a, const OrientedBox & b);

struct FrenetPoint
{
  double s{0.0};
  double d{0.0};  // left positive
};

class Polyline
{
public:
  Polyline() = default;
  /// Throws std::invalid_argument on fewer than two points or repeated consecutive points.
  explicit Polyline(std::vector<Vec2> points);

  const std::vector<Vec2> & points() const { return points_; }
  const std::vector<double> & arclengths() const { return cumulative_; }
  double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  std::size_t segment_count() const { return points_.size() - 1; }

  /// Segment index containing arclength s; vertices belong to the segment they start.
  std::size_t segment_at(double s) const;
  double heading_at(double s) const;
  Vec2 point_at(double s) const;

  bool operator==(const Polyline & o) const { return points_ == o.points_; }

private:
  std::vector<Vec2> points_;
  std::vector<double> cumulative_;
};

/// Nearest-point projection; s is clamped to [0, length].
FrenetPoint project_to_centerline(const Vec2 & p, const Polyline & line);

/// Throws std::out_of_range when s lies outside [0, length].
Pose2D frenet_to_cartesian(const FrenetPoint & f, const Polyline & line);

using Polygon = std::vector<Vec2>;

bool point_in_polygon(const Vec2 & p, const Polygon & polygon);
bool point_in_any(const Vec2 & p, std::span<const Polygon> area);

/// Fraction of the box area outside the union of polygons, sampled on a
/// `resolution` x `resolution` grid of cell centers.
double fraction_outside_drivable(
  const OrientedBox & box, std::span<const Polygon> area, int resolution = 32);

}  // namespace longtail

#endif  // LONGTAIL__GEOMETRY_HPP_
