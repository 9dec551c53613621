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

#ifndef LONGTAIL__SCENARIO_IO_HPP_
#define LONGTAIL__SCENARIO_IO_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "longtail/scenario.hpp"

namespace longtail
{

inline constexpr const char * kScenarioSchemaVersion = "v1";

class MalformedFile : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class VersionMismatch : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

nlohmann::json pose_to_json(const Pose2D & p);
Pose2D pose_from_json(const nlohmann::json & j);
nlohmann::json box_to_json(const OrientedBox & b);
OrientedBox box_from_json(const nlohmann::json & j);
nlohmann::json graph_to_json(const LaneGraph & g);
LaneGraph graph_from_json(const nlohmann::json & j);

nlohmann::json scenario_to_json(const ScenarioSpec & spec);
/// Throws MalformedFile or VersionMismatch.
ScenarioSpec scenario_from_json(const nlohmann::json & j);

std::string dump_scenario(const ScenarioSpec & spec);
ScenarioSpec parse_scenario(const std::string & text);

void save_scenario(const ScenarioSpec & spec, const std::filesystem::path & path);
ScenarioSpec load_scenario(const std::filesystem::path & path);

}  // namespace longtail

#endif  // LONGTAIL__SCENARIO_IO_HPP_
