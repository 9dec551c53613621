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

#ifndef LONGTAIL__SAMPLING_PLANNER_HPP_
#define LONGTAIL__SAMPLING_PLANNER_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "longtail/behaviors.hpp"
#include "longtail/motion.hpp"

namespace longtail
{

inline constexpr std::array<double, 5> kOffsetDeltas{-1.0, -0.5, 0.0, 0.5, 1.0};
inline constexpr std::array<double, 5> kSpeedFractions{0.2, 0.4, 0.6, 0.8, 1.0};
/// Index of the full-stop profile after the IDM fractions.
inline constexpr int kFullStopProfile = 5;
inline constexpr int kProfileCount = 6;
inline constexpr int kCandidateCount = 30;

struct CostWeights
{
  double progress{5.0};
  double ttc{5.0};
  double lateral_offset{1.0};
  double comfort{2.0};

  void validate() const;
};

struct SamplingConfig
{
  CostWeights weights;
  /// Horizon for lead forecasting, at-fault collision checks and TTC.
  double eval_window{2.0};
  double ttc_threshold{0.95};
  IdmParams idm;
};

struct CandidateEval
{
  int offset_index{0};
  int profile{0};
  double delta{0.0};   // offset relative to the behavior offset
  double offset{0.0};  // absolute offset from the behavior centerline
  bool collision{false};
  bool offroad{false};
  double progress{0.0};
  double max_abs_accel{0.0};
  double ttc_violation{0.0};  // fraction of window samples below the threshold
  double cost{0.0};
  Trajectory trajectory;

  bool feasible() const { return !collision && !offroad; }
};

/// Every candidate fully evaluated, in (offset, profile) order.
std::vector<CandidateEval> evaluate_all(
  const Observation & obs, const BehaviorOption & behavior, const SamplingConfig & cfg);

/// (cost, |delta|, -progress) order used for selection.
bool better_candidate(const CandidateEval & a, const CandidateEval & b);

/// Argmin over feasible candidates via bound-ordered search; falls back to
/// the full stop at delta 0 when nothing is feasible.
CandidateEval select_candidate(
  const Observation & obs, const BehaviorOption & behavior, const SamplingConfig & cfg);

Trajectory sampling_planner_plan(
  const Observation & obs, const SamplingConfig & cfg = {},
  const std::optional<BehaviorOption> & behavior = std::nullopt);

class SamplingPlanner : public Planner
{
public:
  explicit SamplingPlanner(SamplingConfig cfg = {}) : cfg_(cfg) {}
  std::string name() const override { return "sampling"; }
  const SamplingConfig & config() const { return cfg_; }

protected:
  Trajectory plan_impl(const Observation & obs) override
  {
    return sampling_planner_plan(obs, cfg_);
  }

private:
  SamplingConfig cfg_;
};

}  // namespace longtail

#endif  // LONGTAIL__SAMPLING_PLANNER_HPP_
