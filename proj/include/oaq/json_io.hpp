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

// JSON encodings of configuration objects. Decoders throw
// Error(kInvalidConfig) with the offending key in the message.

#pragma once

#include "json.hpp"
#include "oaq/agents.hpp"
#include "oaq/engine.hpp"
#include "oaq/llm_config.hpp"

namespace oaq {

nlohmann::json rule_config_to_json(const RuleConfig& config);
RuleConfig rule_config_from_json(const nlohmann::json& j);

// The API key itself is never part of the encoding, only the name of the
// environment variable that holds it.
nlohmann::json llm_config_to_json(const LlmAgentConfig& config);
// "persona" may be a built-in persona name or {"name", "instruction"}.
LlmAgentConfig llm_config_from_json(const nlohmann::json& j);

nlohmann::json agent_spec_to_json(const AgentSpec& spec);
// name_hint is used when the object has no "name" key.
AgentSpec agent_spec_from_json(const nlohmann::json& j, const std::string& name_hint = "");

nlohmann::json action_to_json(const Action& action);
Action action_from_json(const nlohmann::json& j);

// Compact dump that never throws on invalid UTF-8 (bytes are replaced).
std::string dump_compact(const nlohmann::json& j);

}  // namespace oaq
