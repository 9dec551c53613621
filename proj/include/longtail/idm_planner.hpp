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

#ifndef LONGTAIL__IDM_PLANNER_HPP_
#define LONGTAIL__IDM_PLANNER_HPP_

#include <optional>
#include <string>

#include "longtail/motion.hpp"

namespace longtail
{

/// Lane keeping on the current centerline with IDM against the nearest
/// object in the ego corridor.
Trajectory idm_planner_plan(const Observation & obs, const IdmParams & params = {});

struct MobilParams
{
  double politeness{0.3};
  double accel_threshold{0.1};  // m/s^2
  double safe_decel{4.0};       // m/s^2
  /// Added to the incentive of moves toward the goal lane and subtracted from
  /// moves away from it.
  double route_bias{1.0};  // m/s^2

  void validate() const;
};

/// Target neighbor lane, or nothing when no change is both safe and worth it.
std::optional<LaneId> mobil_decide(
  const Observation & obs, const MobilParams & mp = {}, const IdmParams & idm = {});

/// Quintic merge onto `target` (or lane keeping when `target` is empty).
Trajectory lane_trajectory(
  const Observation & obs, const LaneId & lane, const IdmParams & params = {});

Trajectory idm_mobil_plan(
  const Observation & obs, const MobilParams & mp = {}, const IdmParams & idm = {});

class IdmPlanner : public Planner
{
public:
  explicit IdmPlanner(IdmParams params = {}) : params_(params) {}
  std::string name() const override { return "idm"; }

protected:
  Trajectory plan_impl(const Observation & obs) override { return idm_planner_plan(obs, params_); }

private:
  IdmParams params_;
};

class IdmMobilPlanner : public Planner
{
public:
  explicit IdmMobilPlanner(MobilParams mp = {}, IdmParams idm = {}) : mp_(mp), idm_(idm) {}
  std::string name() const override { return "idm_mobil"; }
  std::optional<std::string> current_behavior() const override { return behavior_; }

protected:
  Trajectory plan_impl(const Observation & obs) override;

private:
  MobilParams mp_;
  IdmParams idm_;
  std::optional<std::string> behavior_;
};

}  // namespace longtail

#endif  // LONGTAIL__IDM_PLANNER_HPP_
