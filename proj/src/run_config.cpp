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

#include "oaq/run_config.hpp"

#include "oaq/error.hpp"
#include "oaq/game_log.hpp"
#include "oaq/json_io.hpp"

namespace oaq {

using nlohmann::json;

namespace {

json parse_config_file(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(Errc::kInvalidConfig, "config file " + path.string() + " does not exist");
  }
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidConfig, path.string() + ": " + e.what());
  }
}

const AgentSpec& resolve(const RunConfig& c, const std::string& name) {
  const auto it = c.agents.find(name);
  if (it == c.agents.end()) {
    throw Error(Errc::kInvalidConfig, "match refers to unknown agent '" + name + "'");
  }
  return it->second;
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  AgentSpec random;
  random.kind = AgentKind::kRandom;
  random.name = "random";
  AgentSpec greedy;
  greedy.kind = AgentKind::kGreedy;
  greedy.name = "greedy";
  c.agents = {{random.name, random}, {greedy.name, greedy}};
  c.match.agent_a = random;
  c.match.agent_b = greedy;
  c.match.games = 50;
  return c;
}

void RunConfig::validate() const {
  rule_config.validate();
  for (const auto& [name, spec] : agents) spec.validate();
  match.validate();
  if (classifier) classifier->validate();
  if (workers < 1) throw Error(Errc::kInvalidConfig, "workers must be >= 1");
  if (llm_max_in_flight < 1) throw Error(Errc::kInvalidConfig, "llm_max_in_flight must be >= 1");
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::kInvalidConfig, "run config must be a JSON object");
  RunConfig c;
  try {
    if (j.contains("rule_config")) c.rule_config = rule_config_from_json(j["rule_config"]);
    if (!j.contains("agents") || !j["agents"].is_object()) {
      throw Error(Errc::kInvalidConfig, "run config needs an \"agents\" object");
    }
    for (const auto& [name, spec] : j["agents"].items()) {
      AgentSpec s = agent_spec_from_json(spec, name);
      if (s.name != name) {
        throw Error(Errc::kInvalidConfig, "agent '" + name + "' declares a different name");
      }
      c.agents.emplace(name, std::move(s));
    }
    if (!j.contains("match") || !j["match"].is_object()) {
      throw Error(Errc::kInvalidConfig, "run config needs a \"match\" object");
    }
    const json& m = j["match"];
    c.match.agent_a = resolve(c, m.at("agent_a").get<std::string>());
    c.match.agent_b = resolve(c, m.at("agent_b").get<std::string>());
    c.match.games = m.value("games", 1);
    c.match.base_seed = m.value("base_seed", std::uint64_t{0});
    c.match.swap_sides = m.value("swap_sides", false);
    c.match.rule_config = c.rule_config;
    if (j.contains("classifier") && !j["classifier"].is_null()) {
      c.classifier = llm_config_from_json(j["classifier"]);
    }
    c.output_dir = j.value("output_dir", std::string("runs"));
    c.workers = j.value("workers", 1);
    c.llm_max_in_flight = j.value("llm_max_in_flight", kDefaultInFlightLimit);
    if (j.contains("focal")) c.focal = j["focal"].get<std::string>();
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidConfig, std::string("run config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_json(parse_config_file(path));
}

LlmAgentConfig load_classifier_config(const std::filesystem::path& path) {
  const json j = parse_config_file(path);
  if (j.is_object() && j.contains("classifier")) return llm_config_from_json(j["classifier"]);
  return llm_config_from_json(j);
}

}  // namespace oaq
