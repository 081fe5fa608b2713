// Copyright 2026 The Oaq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment definition read from a single JSON file.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "oaq/agents.hpp"
#include "oaq/arena.hpp"
#include "oaq/chat_transport.hpp"
#include "oaq/engine.hpp"
#include "oaq/llm_config.hpp"

namespace oaq {

// {
//   "rule_config": {...},
//   "agents": {"name": {"kind": "random" | "greedy" | "search" | "llm", ...}},
//   "match": {"agent_a": "name", "agent_b": "name", "games": 50,
//             "base_seed": 0, "swap_sides": false},
//   "classifier": {...llm config...},
//   "output_dir": "runs",
//   "workers": 1,
//   "llm_max_in_flight": 4,
//   "focal": "name"
// }
struct RunConfig {
  RuleConfig rule_config;
  std::map<std::string, AgentSpec> agents;
  MatchConfig match;
  std::optional<LlmAgentConfig> classifier;
  std::filesystem::path output_dir = "runs";
  int workers = 1;
  int llm_max_in_flight = kDefaultInFlightLimit;
  std::optional<std::string> focal;

  // Random vs Greedy, 50 games, seed 0.
  static RunConfig defaults();

  void validate() const;
};

// Throws Error(kInvalidConfig) on any problem, including a missing file.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

// Accepts either a bare LLM config or a run config with a "classifier" key.
LlmAgentConfig load_classifier_config(const std::filesystem::path& path);

}  // namespace oaq
