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

#ifndef LONGTAIL__MOTION_HPP_
#define LONGTAIL__MOTION_HPP_

#include <limits>
#include <vector>

#include "longtail/planning.hpp"

namespace longtail
{

/// Lateral margin beyond the ego half width used when looking for leads.
inline constexpr double kLeadCorridorMargin = 0.2;
/// Objects slower than this are treated as static.
inline constexpr double kStaticSpeed = 0.1;

/// Anything the ego has to stay clear of, with a constant-velocity forecast.
struct WorldObject
{
  enum class Kind { Agent, Pedestrian, Obstacle };
  Kind kind{Kind::Obstacle};
  int index{0};
  OrientedBox box;
  Vec2 velocity;

  bool is_static() const { return velocity.norm() < kStaticSpeed; }
  OrientedBox box_at(double t) const;
};

std::vector<WorldObject> collect_objects(const Observation & obs);

/// Quintic in arclength from (d0, slope0, 0) to (d1, 0, 0) over `length`.
struct LateralProfile
{
  double d0{0.0};
  double slope0{0.0};
  double d1{0.0};
  double length{1.0};

  double at(double sigma) const;
  double slope(double sigma) const;
};

/// Blend distance for lateral moves: three seconds of travel, at least 12 m.
double blend_length(double speed);

inline constexpr double kMinBlendLength = 3.0;

/// Blend toward d1; shortened when the ego is already moving toward d1 so
/// that replanning mid-maneuver does not overshoot.
LateralProfile make_lateral_profile(double d0, double slope0, double d1, double speed);

/// Planning frame: a reference polyline and the ego expressed in it.
struct PathFrame
{
  Polyline path;
  double s0{0.0};
  double d0{0.0};
  double slope0{0.0};  // dd/ds from the ego heading relative to the tangent
  double speed_limit{13.4};
};

PathFrame make_path_frame(const Observation & obs, const LaneId & lane);

/// An object expressed in a path frame, moving linearly in (s, d).
struct PathObject
{
  int object{0};  // index into the collect_objects() result
  double s_center{0.0};
  double d_center{0.0};
  double half_s{0.0};  // s_center - s_min
  double ext_s{0.0};   // s_max - s_center
  double d_lo{0.0};    // d_min - d_center
  double d_hi{0.0};    // d_max - d_center
  double vs{0.0};
  double vd{0.0};
};

std::vector<PathObject> project_objects(
  const PathFrame & frame, const std::vector<WorldObject> & objects, double max_range = 150.0);

struct SpeedProfile
{
  enum class Kind { Idm, FullStop };
  Kind kind{Kind::Idm};
  double target_speed{0.0};
};

struct RolloutOptions
{
  /// Object motion is frozen after this time when searching for leads.
  double forecast_window{std::numeric_limits<double>::infinity()};
  double corridor_margin{kLeadCorridorMargin};
  IdmParams idm;  // desired_speed is overridden by the speed profile
};

struct Rollout
{
  Trajectory trajectory;
  std::vector<double> s;  // ego arclength on the frame per sample
  double progress{0.0};
  double max_abs_accel{0.0};
};

/// Integrates the ego along the lateral profile with IDM (or a 4 m/s^2 stop)
/// for the full trajectory horizon.
Rollout rollout(
  const PathFrame & frame, const LateralProfile & lateral, const SpeedProfile & speed,
  double ego_speed, const std::vector<PathObject> & objects, const RolloutOptions & opts);

}  // namespace longtail

#endif  // LONGTAIL__MOTION_HPP_
