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

// LLM-backed agent: renders the game state, history, rules and persona into
// the decision prompt, asks a chat endpoint, and maps the structured answer
// back onto a legal action.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "oaq/agents.hpp"
#include "oaq/chat_transport.hpp"
#include "oaq/engine.hpp"
#include "oaq/llm_config.hpp"

namespace oaq {

struct PromptBundle {
  std::string game_state_text;
  std::string history_text;
  std::string rules_text;
  std::string persona_text;
};

inline constexpr std::string_view kFirstMoveHistory = "(first move)";

// One line per pit, then ledgers, mover, turn and round.
std::string render_state(const GameState& state);
std::string render_history(const std::optional<TurnSummary>& history);
std::string rules_text(const RuleConfig& config);

PromptBundle make_prompt_bundle(const GameState& state, const std::optional<TurnSummary>& history,
                                const Persona& persona);

// Decision template with every slot filled, followed by the output-format
// instruction for the JSON action block.
std::string build_prompt(const PromptBundle& bundle);

enum class ParseFailureKind { kMissingBlock, kMalformed, kOutOfRange, kIllegalAction };

std::string_view to_string(ParseFailureKind kind);

struct ParseFailure {
  ParseFailureKind kind;
  std::string detail;
};

using ParseResult = std::variant<AgentDecision, ParseFailure>;

// Reads the last well-formed {"reason", "position", "direction"} object in
// raw. position is 1..5 counted along the mover's own row.
ParseResult parse_decision(std::string_view raw, const GameState& state);

inline constexpr std::size_t kFallbackReasonLimit = 500;

// Up to 1 + max_retries calls. Parse failures are retried with a one-line
// correction; after the last one a seeded random legal move is returned
// with fallback_used set. Throws TransportError.
AgentDecision llm_decide(const LlmAgentConfig& config, ChatTransport& transport,
                         const GameState& state, const std::optional<TurnSummary>& history,
                         std::uint64_t fallback_seed);

class LlmAgent : public Agent {
 public:
  LlmAgent(LlmAgentConfig config, std::shared_ptr<ChatTransport> transport, std::uint64_t seed)
      : config_(std::move(config)), transport_(std::move(transport)), seed_(seed) {}

  AgentDecision decide(const GameState& state,
                       const std::optional<TurnSummary>& history) override {
    return llm_decide(config_, *transport_, state, history, seed_);
  }

 private:
  LlmAgentConfig config_;
  std::shared_ptr<ChatTransport> transport_;
  std::uint64_t seed_;
};

// HTTP transport for a config, sharing the global in-flight limiter.
std::shared_ptr<ChatTransport> make_http_transport(const LlmAgentConfig& config);

}  // namespace oaq
