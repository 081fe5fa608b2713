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

// Rules engine for O An Quan on the 12-pit ring.
//
// Ring layout (absolute indices, LTR = increasing index mod 12):
//
//        11  10   9   8   7          <- player B
//    0                          6    <- Quan pits
//         1   2   3   4   5          <- player A
//
// Pits 0..5 form side A (Quan 0 plus regular pits 1-5), pits 6..11 form
// side B (Quan 6 plus regular pits 7-11). Quan ownership only matters for the
// end-of-game sweep.
//
// Every operation here is a pure function of its inputs.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace oaq {

inline constexpr int kNumPits = 12;
inline constexpr int kPitsPerSide = 5;
inline constexpr int kInitialPeasantsPerPit = 5;
inline constexpr int kTotalPeasants = 50;
inline constexpr int kTotalMandarins = 2;
inline constexpr int kRedistributionCost = 5;
inline constexpr int kMaxEventsPerMove = 10'000;

enum class Player : std::uint8_t { kA = 0, kB = 1 };
enum class Direction : std::uint8_t { kLtr = 0, kRtl = 1 };
enum class PitKind : std::uint8_t { kQuan, kRegular };

constexpr int index_of(Player p) { return static_cast<int>(p); }
constexpr Player other(Player p) { return p == Player::kA ? Player::kB : Player::kA; }

constexpr bool is_quan(int pit) { return pit == 0 || pit == 6; }
constexpr PitKind kind_of(int pit) { return is_quan(pit) ? PitKind::kQuan : PitKind::kRegular; }
constexpr bool valid_pit(int pit) { return pit >= 0 && pit < kNumPits; }

// Side owning a pit (Quan 0 belongs to A, Quan 6 to B).
constexpr Player side_of(int pit) { return pit < 6 ? Player::kA : Player::kB; }

constexpr int quan_of(Player p) { return p == Player::kA ? 0 : 6; }

constexpr bool is_own_regular(Player p, int pit) {
  return valid_pit(pit) && !is_quan(pit) && side_of(pit) == p;
}

// Mover-relative position 1..5 <-> absolute pit.
constexpr int absolute_pit(Player p, int position) { return quan_of(p) + position; }
constexpr int relative_position(Player p, int pit) { return pit - quan_of(p); }

constexpr int step(int pit, Direction d, int k = 1) {
  const int delta = d == Direction::kLtr ? k : -k;
  return ((pit + delta) % kNumPits + kNumPits) % kNumPits;
}

struct Pit {
  int peasants = 0;
  bool has_mandarin = false;
  PitKind kind = PitKind::kRegular;

  // A pit is empty when it holds neither peasants nor a Mandarin.
  bool empty() const { return peasants == 0 && !has_mandarin; }
  int tokens() const { return peasants + (has_mandarin ? 1 : 0); }

  friend bool operator==(const Pit&, const Pit&) = default;
};

struct BoardState {
  std::array<Pit, kNumPits> pits;

  // Standard setup: Quan pits hold a Mandarin and no peasants, regular
  // pits hold five peasants each.
  static BoardState initial();

  // Builds a board from raw peasant counts. quan_mandarins[0] is the flag of
  // pit 0, quan_mandarins[1] that of pit 6.
  static BoardState from_counts(const std::array<int, kNumPits>& peasants,
                                std::array<bool, 2> quan_mandarins = {true, true});

  Pit& operator[](int pit) { return pits[static_cast<std::size_t>(pit)]; }
  const Pit& operator[](int pit) const { return pits[static_cast<std::size_t>(pit)]; }

  std::array<int, kNumPits> peasant_vector() const;
  int peasants_on_board() const;
  int mandarins_on_board() const;
  // Peasants on the five regular pits of a side.
  int row_peasants(Player p) const;

  friend bool operator==(const BoardState&, const BoardState&) = default;
};

struct Action {
  int pit = 1;
  Direction direction = Direction::kLtr;

  friend auto operator<=>(const Action&, const Action&) = default;
};

struct CaptureLedger {
  int peasants = 0;
  int mandarins = 0;

  friend bool operator==(const CaptureLedger&, const CaptureLedger&) = default;
};

struct RuleConfig {
  int mandarin_point_value = 10;
  int max_rounds = 25;
  bool relay_enabled = true;
  bool sweep_at_end = true;
  bool quan_leftover_to_side_owner = true;

  // Throws Error(kInvalidConfig).
  void validate() const;

  friend bool operator==(const RuleConfig&, const RuleConfig&) = default;
};

enum class EndReason : std::uint8_t {
  kBothMandarinsCaptured = 1,
  kNoLegalMoves = 2,
  kRoundLimit = 3,
};

struct GameState {
  BoardState board;
  std::array<CaptureLedger, 2> captured{};
  Player current_player = Player::kA;
  int turn_number = 1;
  std::optional<EndReason> end_reason;
  RuleConfig config;

  // Round k covers turns 2k-1 and 2k.
  int round_number() const { return (turn_number + 1) / 2; }
  bool finished() const { return end_reason.has_value(); }

  CaptureLedger& ledger(Player p) { return captured[static_cast<std::size_t>(index_of(p))]; }
  const CaptureLedger& ledger(Player p) const {
    return captured[static_cast<std::size_t>(index_of(p))];
  }

  friend bool operator==(const GameState&, const GameState&) = default;
};

enum class MoveEventKind : std::uint8_t {
  kDrop,
  kRelayPickup,
  kCapture,
  kTurnEndEmpty,
  kTurnEndQuan,
  kTurnEndBlockedQuan,
};

struct MoveEvent {
  MoveEventKind kind = MoveEventKind::kDrop;
  int pit = 0;
  int amount = 0;
  bool mandarin_captured = false;

  friend bool operator==(const MoveEvent&, const MoveEvent&) = default;
};

struct MoveOutcome {
  std::vector<MoveEvent> events;
  int peasants_captured = 0;
  int mandarins_captured = 0;
  // Drop + RelayPickup + Capture events.
  int step_count = 0;
  // Set when the next mover had an empty row and paid for redistribution.
  std::optional<Player> redistributed;
};

// Which Mandarin captures the chain may perform. Disabling both gives the
// unrestricted capture loop.
struct CaptureGates {
  bool mandarin_capture_allowed = true;   // false during the opening rounds
  bool protect_immature_mandarin = true;  // Quan with < 5 peasants is immune

  bool permits(const Pit& target) const;
};

// Called after every emitted event with the state at that instant.
// tokens_in_hand counts peasants picked up but not yet dropped, so
// board + ledgers + in hand is always the full token count.
using EventObserver =
    std::function<void(const MoveEvent& event, const GameState& state, int tokens_in_hand)>;

// Throws Error(kInvalidConfig).
GameState new_game(const RuleConfig& config = {});

// Gates in force for the current mover, derived from the round number.
CaptureGates capture_gates(const GameState& state);

// True when the mover's five pits are empty and the ledger can pay the
// redistribution cost.
bool redistribution_required(const GameState& state);

// Applies the forced redistribution (one peasant back into each of the
// mover's pits) if required; otherwise returns the state unchanged.
GameState begin_turn(GameState state);

// Legal (pit, direction) pairs for the mover, ascending pit, LTR before RTL.
// Evaluated as if begin_turn had been applied. Throws Error(kGameFinished).
std::vector<Action> legal_actions(const GameState& state);

// One handful: picks up every peasant in pit and drops them one by one.
// Throws Error(kEmptySource) / Error(kQuanSource).
BoardState scatter_once(BoardState board, int pit, Direction direction);

// Capture loop starting after last_drop. Mutates board, returns the events
// (Capture events plus at most one TurnEnd event).
std::vector<MoveEvent> run_capture_chain(BoardState& board, int last_drop, Direction direction,
                                         CaptureGates gates);

// Same loop on a full state: captured contents go to the current mover's
// ledger, gates come from the round number.
std::pair<GameState, std::vector<MoveEvent>> capture_chain(GameState state, int last_drop,
                                                           Direction direction);

// Scatter, relay, capture; then advances the turn, evaluates the end
// conditions and prepares the next mover's redistribution.
// Throws Error(kIllegalAction), Error(kGameFinished), Error(kStepBudgetExceeded).
std::pair<GameState, MoveOutcome> apply_move(const GameState& state, const Action& action,
                                             const EventObserver& observer = {});

std::optional<EndReason> check_end(const GameState& state);

// Points per player (index by Player). Throws Error(kGameInProgress).
std::array<int, 2> final_scores(const GameState& state);

// nullopt on a draw.
std::optional<Player> winner_of(const std::array<int, 2>& scores);

// FNV-1a 64 over the canonical encoding:
//   pits 0..11 as (u32 peasants, u8 mandarin),
//   ledgers A, B as (u32 peasants, u8 mandarins),
//   u8 current player, u32 turn number, u8 status (0 = in progress, else
//   the EndReason value). Integers little-endian.
std::uint64_t state_hash(const GameState& state);

std::string_view to_string(Player p);
std::string_view to_string(Direction d);
std::string_view to_string(EndReason r);
std::string_view to_string(MoveEventKind k);
std::optional<Player> parse_player(std::string_view text);
std::optional<Direction> parse_direction(std::string_view text);
std::optional<EndReason> parse_end_reason(std::string_view text);

// Two-row board drawing for transcripts.
std::string draw_board(const BoardState& board);

}  // namespace oaq
