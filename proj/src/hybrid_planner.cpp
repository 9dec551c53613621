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

#include "longtail/hybrid_planner.hpp"

#include <cmath>
#include <stdexcept>

namespace longtail
{

HybridPlanner::HybridPlanner(
  std::shared_ptr<BehaviorSelector> selector, SamplingConfig cfg, double dwell_time)
: selector_(std::move(selector)), cfg_(cfg), dwell_time_(dwell_time)
{
  if (!selector_) {
    throw std::invalid_argument("hybrid planner needs a behavior selector");
  }
  if (!(dwell_time_ >= 0.0) || !std::isfinite(dwell_time_)) {
    throw std::invalid_argument("hybrid dwell time must be finite and non-negative");
  }
  cfg_.weights.validate();
}

Trajectory HybridPlanner::plan_impl(const Observation & obs)
{
  const auto options = enumerate_behaviors(obs);
  const auto second = static_cast<long long>(std::floor(obs.time + 1e-9));
  if (!last_query_second_ || second != *last_query_second_) {
    last_query_second_ = second;
    ++queries_;
    try {
      const BehaviorLabel chosen = selector_->select(obs, options).chosen;
      const bool held = chosen != selected_ && last_switch_time_ &&
                        obs.time - *last_switch_time_ < dwell_time_ - 1e-9;
      if (!held) {
        if (chosen != selected_ || !last_switch_time_) {
          last_switch_time_ = obs.time;
        }
        selected_ = chosen;
        if (const BehaviorOption * o = find_option(options, selected_)) {
          selected_lane_ = o->centerline;
        }
      }
    } catch (const std::exception &) {
      // Keep the previous label.
      ++failed_queries_;
    }
  }
  // Between queries the label is re-resolved against fresh options. A merge
  // stays bound to its target lane, so it ends once that lane is reached;
  // other labels may simply disappear, e.g. once an obstacle is passed.
  const BehaviorOption * option = find_option(options, selected_);
  const bool merge =
    selected_ == BehaviorLabel::MergeLeft || selected_ == BehaviorLabel::MergeRight;
  if (option && merge && option->centerline != selected_lane_) {
    option = nullptr;
  }
  if (!option) {
    option = &options.front();
  }
  active_ = option->label;
  return sampling_planner_plan(obs, cfg_, *option);
}

}  // namespace longtail
