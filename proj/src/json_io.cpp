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

#include "oaq/json_io.hpp"

#include "oaq/error.hpp"

namespace oaq {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(Errc::kInvalidConfig, "'" + key + "' " + why);
}

const json& require_object(const json& j, const std::string& what) {
  if (!j.is_object()) bad(what, "must be an object");
  return j;
}

template <typename T>
void read_int(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_number_integer()) bad(key, "must be an integer");
  out = j[key].get<T>();
}

void read_bool(const json& j, const char* key, bool& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_boolean()) bad(key, "must be a boolean");
  out = j[key].get<bool>();
}

void read_string(const json& j, const char* key, std::string& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_string()) bad(key, "must be a string");
  out = j[key].get<std::string>();
}

}  // namespace

json rule_config_to_json(const RuleConfig& c) {
  return {{"mandarin_point_value", c.mandarin_point_value},
          {"max_rounds", c.max_rounds},
          {"relay_enabled", c.relay_enabled},
          {"sweep_at_end", c.sweep_at_end},
          {"quan_leftover_to_side_owner", c.quan_leftover_to_side_owner}};
}

RuleConfig rule_config_from_json(const json& j) {
  require_object(j, "rule_config");
  RuleConfig c;
  read_int(j, "mandarin_point_value", c.mandarin_point_value);
  read_int(j, "max_rounds", c.max_rounds);
  read_bool(j, "relay_enabled", c.relay_enabled);
  read_bool(j, "sweep_at_end", c.sweep_at_end);
  read_bool(j, "quan_leftover_to_side_owner", c.quan_leftover_to_side_owner);
  c.validate();
  return c;
}

json llm_config_to_json(const LlmAgentConfig& c) {
  json j = {{"endpoint_url", c.endpoint_url},
            {"model_name", c.model_name},
            {"max_retries", c.max_retries},
            {"request_timeout_ms", c.request_timeout.count()},
            {"persona", {{"name", c.persona.name}, {"instruction", c.persona.instruction}}},
            {"api_key_env_var", c.api_key_env_var}};
  j["temperature"] = c.temperature ? json(*c.temperature) : json(nullptr);
  return j;
}

LlmAgentConfig llm_config_from_json(const json& j) {
  require_object(j, "llm");
  LlmAgentConfig c;
  read_string(j, "endpoint_url", c.endpoint_url);
  read_string(j, "model_name", c.model_name);
  read_int(j, "max_retries", c.max_retries);
  read_string(j, "api_key_env_var", c.api_key_env_var);
  if (j.contains("temperature") && !j["temperature"].is_null()) {
    if (!j["temperature"].is_number()) bad("temperature", "must be a number");
    c.temperature = j["temperature"].get<double>();
  }
  if (j.contains("request_timeout_ms")) {
    long long ms = 0;
    read_int(j, "request_timeout_ms", ms);
    c.request_timeout = std::chrono::milliseconds(ms);
  }
  if (j.contains("persona")) {
    const json& p = j["persona"];
    if (p.is_string()) {
      auto found = find_builtin_persona(p.get<std::string>());
      if (!found) bad("persona", "is not a built-in persona: " + p.get<std::string>());
      c.persona = *found;
    } else if (p.is_object()) {
      read_string(p, "name", c.persona.name);
      read_string(p, "instruction", c.persona.instruction);
    } else {
      bad("persona", "must be a name or an object");
    }
  } else {
    c.persona = *find_builtin_persona("Balanced");
  }
  c.validate();
  return c;
}

json agent_spec_to_json(const AgentSpec& s) {
  json j = {{"kind", std::string(to_string(s.kind))}, {"name", s.name}};
  if (s.seed) j["seed"] = *s.seed;
  if (s.depth) j["depth"] = *s.depth;
  if (s.llm) j["llm"] = llm_config_to_json(*s.llm);
  return j;
}

AgentSpec agent_spec_from_json(const json& j, const std::string& name_hint) {
  require_object(j, "agent");
  AgentSpec s;
  s.name = name_hint;
  read_string(j, "name", s.name);
  std::string kind;
  read_string(j, "kind", kind);
  const auto parsed = parse_agent_kind(kind);
  if (!parsed) bad("kind", "must be one of random, greedy, search, llm");
  s.kind = *parsed;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad("seed", "must be a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("depth")) {
    int depth = 0;
    read_int(j, "depth", depth);
    s.depth = depth;
  }
  if (j.contains("llm")) s.llm = llm_config_from_json(j["llm"]);
  s.validate();
  return s;
}

json action_to_json(const Action& a) {
  return {{"pit", a.pit}, {"direction", std::string(to_string(a.direction))}};
}

Action action_from_json(const json& j) {
  require_object(j, "action");
  Action a;
  read_int(j, "pit", a.pit);
  std::string dir;
  read_string(j, "direction", dir);
  const auto d = parse_direction(dir);
  if (!d) bad("direction", "must be LTR or RTL");
  a.direction = *d;
  return a;
}

std::string dump_compact(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace oaq
