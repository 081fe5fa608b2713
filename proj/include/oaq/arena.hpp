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

// Seeded matches, tournaments and replay verification.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oaq/agents.hpp"
#include "oaq/engine.hpp"
#include "oaq/game_log.hpp"

namespace oaq {

struct MatchConfig {
  AgentSpec agent_a;
  AgentSpec agent_b;
  RuleConfig rule_config;
  int games = 1;
  std::uint64_t base_seed = 0;
  // Alternate which agent moves first; agent_a always moves first otherwise.
  bool swap_sides = false;

  // Throws Error(kInvalidConfig).
  void validate() const;
};

// FNV-1a 64 over base_seed then game_index, each as 8 little-endian bytes.
std::uint64_t game_seed(std::uint64_t base_seed, std::uint64_t game_index);

// FNV-1a 64 over game seed (8 bytes), seat (1 byte: 0 = A, 1 = B) and the
// agent's own seed (8 bytes, 0 when unset).
std::uint64_t agent_seed(std::uint64_t game_seed, Player seat,
                         std::optional<std::uint64_t> spec_seed);

// Builds the agent for one seat of one game.
using AgentFactory =
    std::function<std::unique_ptr<Agent>(const AgentSpec& spec, std::uint64_t seed)>;

// Scripted agents directly, LLM agents over HTTP.
AgentFactory default_agent_factory();

// Called after each move with the new record and the resulting state.
using TurnCallback = std::function<void(const TurnRecord&, const GameState&)>;

// Plays one game. A TransportError ends the game early with an "Aborted"
// result that keeps every completed turn.
GameLog run_game(const MatchConfig& config, int game_index,
                 const AgentFactory& factory = default_agent_factory(),
                 const TurnCallback& on_turn = {});

struct TournamentOptions {
  int workers = 1;
  AgentFactory factory = default_agent_factory();
  TurnCallback on_turn;  // only honoured with workers == 1
};

struct TournamentSummary {
  int games = 0;
  int wins_a = 0;  // by agent, not seat
  int wins_b = 0;
  int draws = 0;
  int aborts = 0;
  double mean_points_a = 0;  // over non-aborted games
  double mean_points_b = 0;
  std::filesystem::path manifest_path;
  std::string manifest_digest;
  std::vector<std::filesystem::path> log_files;
};

inline constexpr const char* kManifestFile = "manifest.json";

// File name of game i's log.
std::string log_file_name(int game_index);

// Runs every game, writes one JSONL log per game and a manifest. Each log is
// replay-verified right after it is written. Output bytes do not depend on
// the worker count.
TournamentSummary run_tournament(const MatchConfig& config,
                                 const std::filesystem::path& output_dir,
                                 const TournamentOptions& options = {});

struct Divergence {
  int turn = 0;  // 0 for the result line
  std::string field;
  std::string expected;  // recomputed by the engine
  std::string actual;    // found in the log
};

struct ReplayReport {
  int turns_checked = 0;
  std::optional<Divergence> divergence;
  std::vector<int> step_counts;  // recomputed, per turn

  bool verified() const { return !divergence.has_value(); }
};

// Re-applies every action from the header's rule config (or the override)
// and compares every recorded field. Stops at the first divergence.
ReplayReport replay(const GameLog& log,
                    const std::optional<RuleConfig>& rule_config_override = std::nullopt);

}  // namespace oaq
