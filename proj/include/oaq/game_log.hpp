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

// Persisted game records.
//
// A log is JSONL: line 1 is the header, then one TurnRecord per line, and
// the last line is the result. Every TurnRecord carries record_digest, the
// FNV-1a 64 of the record's compact JSON (sorted keys) without that field,
// so edits to fields replay cannot recompute (reason, attempts, ...) are
// still caught.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "oaq/agents.hpp"
#include "oaq/engine.hpp"

namespace oaq {

struct BoardSnapshot {
  std::array<int, kNumPits> peasants{};
  std::array<bool, kNumPits> mandarins{};

  static BoardSnapshot of(const BoardState& board);

  friend bool operator==(const BoardSnapshot&, const BoardSnapshot&) = default;
};

struct TurnRecord {
  int turn_number = 0;
  int round_number = 0;
  Player mover = Player::kA;
  BoardSnapshot board_before;
  Action action;
  std::string reason;
  bool fallback_used = false;
  int attempts = 1;
  int step_count = 0;
  int peasants_captured = 0;
  int mandarins_captured = 0;
  BoardSnapshot board_after;
  std::array<CaptureLedger, 2> ledgers_after{};
  std::uint64_t state_hash_after = 0;
  std::vector<LlmExchange> exchanges;  // LLM agents only
  // Digest read from a parsed log; unset on freshly played records.
  std::optional<std::uint64_t> record_digest;
};

struct GameHeader {
  std::string artifact_version;
  RuleConfig rule_config;
  AgentSpec agent_a;
  AgentSpec agent_b;
  std::array<std::string, 2> seats;  // agent name playing A, B
  std::uint64_t base_seed = 0;
  int game_index = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::string_view kAbortedReason = "Aborted";

struct GameResult {
  std::string end_reason;  // EndReason name, or "Aborted"
  std::optional<std::array<int, 2>> points;
  std::optional<Player> winner;  // nullopt: draw (or aborted)
  int ending_round = 0;
  std::string error;  // aborted games only

  bool aborted() const { return end_reason == kAbortedReason; }
};

struct GameLog {
  GameHeader header;
  std::vector<TurnRecord> turns;
  GameResult result;

  // Seat held by the named agent, if any.
  std::optional<Player> seat_of(std::string_view agent_name) const;
};

// Every field except record_digest.
nlohmann::json turn_record_body_json(const TurnRecord& record);
// Body plus a freshly computed record_digest.
nlohmann::json turn_record_to_json(const TurnRecord& record);
TurnRecord turn_record_from_json(const nlohmann::json& j);
std::uint64_t compute_record_digest(const TurnRecord& record);

std::string to_jsonl(const GameLog& log);
// Throws Error(kMalformedLog).
GameLog parse_game_log(std::string_view text);

// Throws Error(kIo) / Error(kMalformedLog).
GameLog read_game_log(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);

// Writes through a temporary file and a rename, so a reader never sees a
// half-written file. Throws Error(kIo).
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Hex FNV-1a digest of the serialized log; stable id for caches.
std::string log_id(const GameLog& log);

}  // namespace oaq
