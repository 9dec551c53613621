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

#ifndef LONGTAIL__HYBRID_PLANNER_HPP_
#define LONGTAIL__HYBRID_PLANNER_HPP_

#include <memory>
#include <optional>
#include <string>

#include "longtail/llm.hpp"
#include "longtail/sampling_planner.hpp"

namespace longtail
{

/// Behavior selection at 1 Hz feeding the sampling planner every tick.
class HybridPlanner : public Planner
{
public:
  /// A nonzero `dwell_time` (s) holds a newly selected label at least that
  /// long before another switch is accepted.
  explicit HybridPlanner(
    std::shared_ptr<BehaviorSelector> selector, SamplingConfig cfg = {}, double dwell_time = 0.0);

  std::string name() const override { return "hybrid"; }
  std::optional<std::string> current_behavior() const override
  {
    return std::string(to_string(active_));
  }

  int query_count() const { return queries_; }
  int failed_query_count() const { return failed_queries_; }
  /// Label returned by the most recent successful query.
  BehaviorLabel selected_label() const { return selected_; }
  const BehaviorSelector & selector() const { return *selector_; }

protected:
  Trajectory plan_impl(const Observation & obs) override;

private:
  std::shared_ptr<BehaviorSelector> selector_;
  SamplingConfig cfg_;
  double dwell_time_;
  std::optional<long long> last_query_second_;
  std::optional<double> last_switch_time_;
  BehaviorLabel selected_{BehaviorLabel::FollowLane};
  LaneId selected_lane_;
  BehaviorLabel active_{BehaviorLabel::FollowLane};
  int queries_{0};
  int failed_queries_{0};
};

}  // namespace longtail

#endif  // LONGTAIL__HYBRID_PLANNER_HPP_
