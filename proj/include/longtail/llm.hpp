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

#ifndef LONGTAIL__LLM_HPP_
#define LONGTAIL__LLM_HPP_

#include <array>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "longtail/behaviors.hpp"
#include "longtail/scenario.hpp"

namespace longtail
{

struct PromptBundle
{
  std::string task_instruction;
  std::string perception_context;
  std::string ego_states;
  std::string mission_goal;
  std::string options;

  /// Everything except the task instruction, in section order.
  std::string user_message() const;
  bool operator==(const PromptBundle &) const = default;
};

struct SceneDescription
{
  std::string perception_context;
  std::string ego_states;
  std::string mission_goal;
};

/// Ego-frame text for the nearest ten agents, obstacles, lanes and limits.
/// Numbers are printed with one decimal.
SceneDescription render_scene_description(const Observation & obs);

PromptBundle build_behavior_prompt(
  const Observation & obs, const std::vector<BehaviorOption> & options);

PromptBundle build_waypoints_prompt(const Observation & obs);

struct SelectorResponse
{
  BehaviorLabel chosen{BehaviorLabel::FollowLane};
  std::string rationale;
};

class NoLabelFound : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class MalformedTrajectory : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// The last option label in the text wins; identifiers and prose forms are
/// both accepted, case-insensitively.
SelectorResponse parse_behavior_response(
  const std::string & text, const std::vector<BehaviorOption> & options);

inline constexpr int kWaypointCount = 16;
inline constexpr double kWaypointStep = 0.5;

/// First run of at least 16 numeric (x, y) pairs; exactly 16 are returned.
std::array<Vec2, kWaypointCount> parse_waypoints_response(const std::string & text);

/// Deterministic stand-in for the language model.
SelectorResponse scripted_oracle(
  ScenarioType type, const Observation & obs, const std::vector<BehaviorOption> & options);

struct ClientConfig
{
  std::string endpoint;
  std::string model{"gpt-4o"};
  std::string api_key;
  double timeout{30.0};
  int max_retries{2};
  double temperature{0.0};

  void validate() const;
  /// LLM_ENDPOINT, LLM_MODEL and LLM_API_KEY; unset variables keep defaults.
  static ClientConfig from_environment();
};

class LlmError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class Timeout : public LlmError
{
public:
  using LlmError::LlmError;
};

class TransportError : public LlmError
{
public:
  using LlmError::LlmError;
};

class NonSuccessStatus : public LlmError
{
public:
  NonSuccessStatus(int status, const std::string & body)
  : LlmError("LLM endpoint returned HTTP " + std::to_string(status)), status_(status), body_(body)
  {
  }
  int status() const { return status_; }
  const std::string & body() const { return body_; }

private:
  int status_;
  std::string body_;
};

/// Chat-completion request body for a prompt.
std::string chat_request_body(const PromptBundle & prompt, const ClientConfig & cfg);

/// Posts the prompt and returns choices[0].message.content.
std::string llm_call(const PromptBundle & prompt, const ClientConfig & cfg);

/// Text completion backend; implementations must be safe to call from one
/// thread at a time per instance.
class ChatClient
{
public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const PromptBundle & prompt) = 0;
};

class HttpChatClient : public ChatClient
{
public:
  explicit HttpChatClient(ClientConfig cfg);
  std::string complete(const PromptBundle & prompt) override { return llm_call(prompt, cfg_); }

private:
  ClientConfig cfg_;
};

/// Returns canned text; for tests and offline runs.
class MockChatClient : public ChatClient
{
public:
  explicit MockChatClient(std::function<std::string(const PromptBundle &)> responder)
  : responder_(std::move(responder))
  {
  }
  std::string complete(const PromptBundle & prompt) override { return responder_(prompt); }

private:
  std::function<std::string(const PromptBundle &)> responder_;
};

/// One exchange with a model, kept for auditing.
struct LlmExchange
{
  double time{0.0};
  PromptBundle prompt;
  std::string response;
  std::string error;
};

class BehaviorSelector
{
public:
  virtual ~BehaviorSelector() = default;
  /// May throw; the hybrid planner treats any exception as a failed query.
  virtual SelectorResponse select(
    const Observation & obs, const std::vector<BehaviorOption> & options) = 0;
  virtual const std::vector<LlmExchange> * exchanges() const { return nullptr; }
};

class OracleSelector : public BehaviorSelector
{
public:
  explicit OracleSelector(ScenarioType type) : type_(type) {}
  SelectorResponse select(
    const Observation & obs, const std::vector<BehaviorOption> & options) override
  {
    return scripted_oracle(type_, obs, options);
  }

private:
  ScenarioType type_;
};

class LlmSelector : public BehaviorSelector
{
public:
  explicit LlmSelector(std::shared_ptr<ChatClient> client) : client_(std::move(client)) {}
  SelectorResponse select(
    const Observation & obs, const std::vector<BehaviorOption> & options) override;
  const std::vector<LlmExchange> * exchanges() const override { return &log_; }

private:
  std::shared_ptr<ChatClient> client_;
  std::vector<LlmExchange> log_;
};

}  // namespace longtail

#endif  // LONGTAIL__LLM_HPP_
