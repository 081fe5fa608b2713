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

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oaq/engine.hpp"
#include "oaq/llm_config.hpp"

namespace oaq {

enum class AgentKind { kRandom, kGreedy, kSearch, kLlm };

std::string_view to_string(AgentKind kind);
std::optional<AgentKind> parse_agent_kind(std::string_view text);

struct AgentSpec {
  AgentKind kind = AgentKind::kRandom;
  std::string name;
  std::optional<std::uint64_t> seed;
  std::optional<int> depth;  // Search only
  std::optional<LlmAgentConfig> llm;  // Llm only

  // Throws Error(kInvalidConfig) when kind-specific fields are missing or
  // present on the wrong kind.
  void validate() const;

  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

// What the next mover is told about the previous turn.
struct TurnSummary {
  Player mover = Player::kA;
  Action action;
  std::string reason;
  int points_delta = 0;
};

// One prompt/response round trip with an LLM endpoint.
struct LlmExchange {
  std::string request;
  std::string response;

  friend bool operator==(const LlmExchange&, const LlmExchange&) = default;
};

struct AgentDecision {
  std::string reason;
  Action action;
  bool fallback_used = false;
  int attempts = 1;
  std::vector<LlmExchange> exchanges;
};

class Agent {
 public:
  virtual ~Agent() = default;

  // Requires an in-progress state with at least one legal action.
  virtual AgentDecision decide(const GameState& state,
                               const std::optional<TurnSummary>& history) = 0;
};

// Points a move banks immediately (captured peasants plus Mandarin value).
int immediate_points(const MoveOutcome& outcome, const RuleConfig& config);

// Uniform draw in [0, n) from a generator seeded by (seed, state). Pure: the
// same pair always yields the same index.
std::size_t seeded_index(std::uint64_t seed, const GameState& state, std::size_t n);

AgentDecision random_decision(std::uint64_t seed, const GameState& state);
AgentDecision greedy_decision(const GameState& state);

inline constexpr long kDefaultSearchNodeBudget = 5'000'000;

// Negamax with alpha-beta over net captured points. Ties keep the earliest
// action in legal_actions order (lowest pit, LTR first).
// Throws Error(kSearchBudgetExceeded).
AgentDecision search_decision(const GameState& state, int depth,
                              long node_budget = kDefaultSearchNodeBudget);

class RandomAgent : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : seed_(seed) {}
  AgentDecision decide(const GameState& state, const std::optional<TurnSummary>&) override {
    return random_decision(seed_, state);
  }

 private:
  std::uint64_t seed_;
};

class GreedyAgent : public Agent {
 public:
  AgentDecision decide(const GameState& state, const std::optional<TurnSummary>&) override {
    return greedy_decision(state);
  }
};

class SearchAgent : public Agent {
 public:
  explicit SearchAgent(int depth, long node_budget = kDefaultSearchNodeBudget)
      : depth_(depth), node_budget_(node_budget) {}
  AgentDecision decide(const GameState& state, const std::optional<TurnSummary>&) override {
    return search_decision(state, depth_, node_budget_);
  }

 private:
  int depth_;
  long node_budget_;
};

// Random, Greedy or Search agent for a spec. Throws Error(kInvalidConfig)
// for Llm specs, which need a transport (see LlmAgent).
std::unique_ptr<Agent> make_scripted_agent(const AgentSpec& spec, std::uint64_t seed);

}  // namespace oaq
