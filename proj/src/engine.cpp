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

#include "oaq/engine.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "oaq/error.hpp"
#include "oaq/hash.hpp"

namespace oaq {
namespace {

// Emits events into a MoveOutcome while keeping the ledger and the observer
// in step with the board.
class MoveRecorder {
 public:
  MoveRecorder(GameState& state, MoveOutcome& outcome, const EventObserver& observer)
      : state_(state), outcome_(outcome), observer_(observer) {}

  void emit(const MoveEvent& event) {
    if (static_cast<int>(outcome_.events.size()) >= kMaxEventsPerMove) {
      throw Error(Errc::kStepBudgetExceeded,
                  "move exceeded " + std::to_string(kMaxEventsPerMove) + " events");
    }
    switch (event.kind) {
      case MoveEventKind::kCapture: {
        auto& ledger = state_.ledger(state_.current_player);
        ledger.peasants += event.amount;
        outcome_.peasants_captured += event.amount;
        if (event.mandarin_captured) {
          ++ledger.mandarins;
          ++outcome_.mandarins_captured;
        }
        ++outcome_.step_count;
        break;
      }
      case MoveEventKind::kDrop:
      case MoveEventKind::kRelayPickup:
        ++outcome_.step_count;
        break;
      default:
        break;
    }
    outcome_.events.push_back(event);
    if (observer_) observer_(event, state_, in_hand_);
  }

  void set_in_hand(int tokens) { in_hand_ = tokens; }

 private:
  GameState& state_;
  MoveOutcome& outcome_;
  const EventObserver& observer_;
  int in_hand_ = 0;
};

// Drops `hand` peasants one at a time after `from`. Returns the last pit
// that received a drop. The caller has already emptied the source.
template <typename OnDrop>
int sow(BoardState& board, int from, Direction d, int hand, OnDrop&& on_drop) {
  int pos = from;
  while (hand > 0) {
    pos = step(pos, d);
    ++board[pos].peasants;
    --hand;
    on_drop(pos, hand);
  }
  return pos;
}

template <typename Emit>
void capture_loop(BoardState& board, int i, Direction d, CaptureGates gates, Emit&& emit) {
  while (true) {
    const int j1 = step(i, d, 1);
    const int j2 = step(i, d, 2);
    if (!board[j1].empty()) return;
    if (board[j2].empty()) {
      emit(MoveEvent{MoveEventKind::kTurnEndEmpty, j1, 0, false});
      return;
    }
    if (!gates.permits(board[j2])) {
      emit(MoveEvent{MoveEventKind::kTurnEndBlockedQuan, j2, 0, false});
      return;
    }
    Pit& target = board[j2];
    const MoveEvent capture{MoveEventKind::kCapture, j2, target.peasants, target.has_mandarin};
    target.peasants = 0;
    target.has_mandarin = false;
    emit(capture);
    i = j2;
  }
}

void check_source(const BoardState& board, int pit) {
  if (!valid_pit(pit)) throw Error(Errc::kIllegalAction, "pit out of range");
  if (is_quan(pit)) throw Error(Errc::kQuanSource, "cannot scatter from Quan pit");
  if (board[pit].peasants < 1) throw Error(Errc::kEmptySource, "source pit is empty");
}

}  // namespace

BoardState BoardState::initial() {
  BoardState b;
  for (int i = 0; i < kNumPits; ++i) {
    b[i].kind = kind_of(i);
    b[i].has_mandarin = is_quan(i);
    b[i].peasants = is_quan(i) ? 0 : kInitialPeasantsPerPit;
  }
  return b;
}

BoardState BoardState::from_counts(const std::array<int, kNumPits>& peasants,
                                   std::array<bool, 2> quan_mandarins) {
  BoardState b;
  for (int i = 0; i < kNumPits; ++i) {
    b[i].kind = kind_of(i);
    b[i].peasants = peasants[static_cast<std::size_t>(i)];
  }
  b[0].has_mandarin = quan_mandarins[0];
  b[6].has_mandarin = quan_mandarins[1];
  return b;
}

std::array<int, kNumPits> BoardState::peasant_vector() const {
  std::array<int, kNumPits> v{};
  for (int i = 0; i < kNumPits; ++i) v[static_cast<std::size_t>(i)] = (*this)[i].peasants;
  return v;
}

int BoardState::peasants_on_board() const {
  return std::accumulate(pits.begin(), pits.end(), 0,
                         [](int acc, const Pit& p) { return acc + p.peasants; });
}

int BoardState::mandarins_on_board() const {
  return static_cast<int>(
      std::count_if(pits.begin(), pits.end(), [](const Pit& p) { return p.has_mandarin; }));
}

int BoardState::row_peasants(Player p) const {
  int sum = 0;
  for (int pos = 1; pos <= kPitsPerSide; ++pos) sum += (*this)[absolute_pit(p, pos)].peasants;
  return sum;
}

void RuleConfig::validate() const {
  if (mandarin_point_value <= 0) {
    throw Error(Errc::kInvalidConfig, "mandarin_point_value must be positive");
  }
  if (max_rounds <= 0) throw Error(Errc::kInvalidConfig, "max_rounds must be positive");
}

bool CaptureGates::permits(const Pit& target) const {
  if (!target.has_mandarin) return true;
  if (!mandarin_capture_allowed) return false;
  return !protect_immature_mandarin || target.peasants >= 5;
}

GameState new_game(const RuleConfig& config) {
  config.validate();
  GameState s;
  s.board = BoardState::initial();
  s.config = config;
  return s;
}

CaptureGates capture_gates(const GameState& state) {
  return CaptureGates{.mandarin_capture_allowed = state.round_number() > 2,
                      .protect_immature_mandarin = true};
}

bool redistribution_required(const GameState& state) {
  return state.board.row_peasants(state.current_player) == 0 &&
         state.ledger(state.current_player).peasants >= kRedistributionCost;
}

GameState begin_turn(GameState state) {
  if (state.finished() || !redistribution_required(state)) return state;
  const Player p = state.current_player;
  state.ledger(p).peasants -= kRedistributionCost;
  for (int pos = 1; pos <= kPitsPerSide; ++pos) ++state.board[absolute_pit(p, pos)].peasants;
  return state;
}

std::vector<Action> legal_actions(const GameState& state) {
  if (state.finished()) throw Error(Errc::kGameFinished, "legal_actions on finished game");
  const GameState prepared = begin_turn(state);
  std::vector<Action> actions;
  for (int pos = 1; pos <= kPitsPerSide; ++pos) {
    const int pit = absolute_pit(prepared.current_player, pos);
    if (prepared.board[pit].peasants >= 1) {
      actions.push_back({pit, Direction::kLtr});
      actions.push_back({pit, Direction::kRtl});
    }
  }
  return actions;
}

BoardState scatter_once(BoardState board, int pit, Direction direction) {
  check_source(board, pit);
  const int hand = board[pit].peasants;
  board[pit].peasants = 0;
  sow(board, pit, direction, hand, [](int, int) {});
  return board;
}

std::vector<MoveEvent> run_capture_chain(BoardState& board, int last_drop, Direction direction,
                                         CaptureGates gates) {
  std::vector<MoveEvent> events;
  capture_loop(board, last_drop, direction, gates,
               [&](const MoveEvent& e) { events.push_back(e); });
  return events;
}

std::pair<GameState, std::vector<MoveEvent>> capture_chain(GameState state, int last_drop,
                                                           Direction direction) {
  if (state.finished()) throw Error(Errc::kGameFinished, "capture_chain on finished game");
  const CaptureGates gates = capture_gates(state);
  auto events = run_capture_chain(state.board, last_drop, direction, gates);
  auto& ledger = state.ledger(state.current_player);
  for (const auto& e : events) {
    if (e.kind != MoveEventKind::kCapture) continue;
    ledger.peasants += e.amount;
    if (e.mandarin_captured) ++ledger.mandarins;
  }
  return {std::move(state), std::move(events)};
}

std::pair<GameState, MoveOutcome> apply_move(const GameState& input, const Action& action,
                                             const EventObserver& observer) {
  if (input.finished()) throw Error(Errc::kGameFinished, "apply_move on finished game");
  GameState state = begin_turn(input);
  if (!is_own_regular(state.current_player, action.pit) ||
      state.board[action.pit].peasants < 1) {
    throw Error(Errc::kIllegalAction, "pit " + std::to_string(action.pit) + " " +
                                          std::string(to_string(action.direction)) +
                                          " is not legal for player " +
                                          std::string(to_string(state.current_player)));
  }

  MoveOutcome outcome;
  MoveRecorder rec(state, outcome, observer);
  BoardState& board = state.board;
  const Direction d = action.direction;
  auto on_drop = [&](int pit, int hand_left) {
    rec.set_in_hand(hand_left);
    rec.emit(MoveEvent{MoveEventKind::kDrop, pit, 1, false});
  };

  int hand = board[action.pit].peasants;
  board[action.pit].peasants = 0;
  int last = sow(board, action.pit, d, hand, on_drop);

  while (true) {
    const int next = step(last, d);
    if (is_quan(next)) {
      rec.emit(MoveEvent{MoveEventKind::kTurnEndQuan, next, 0, false});
      break;
    }
    if (board[next].peasants >= 1 && state.config.relay_enabled) {
      hand = board[next].peasants;
      board[next].peasants = 0;
      rec.set_in_hand(hand);
      rec.emit(MoveEvent{MoveEventKind::kRelayPickup, next, hand, false});
      last = sow(board, next, d, hand, on_drop);
      continue;
    }
    capture_loop(board, last, d, capture_gates(state),
                 [&](const MoveEvent& e) { rec.emit(e); });
    break;
  }

  state.current_player = other(state.current_player);
  ++state.turn_number;
  state.end_reason = check_end(state);
  if (!state.finished() && redistribution_required(state)) {
    outcome.redistributed = state.current_player;
    state = begin_turn(std::move(state));
  }
  return {std::move(state), std::move(outcome)};
}

std::optional<EndReason> check_end(const GameState& state) {
  if (state.captured[0].mandarins + state.captured[1].mandarins >= kTotalMandarins) {
    return EndReason::kBothMandarinsCaptured;
  }
  if (state.board.row_peasants(state.current_player) == 0 &&
      state.ledger(state.current_player).peasants < kRedistributionCost) {
    return EndReason::kNoLegalMoves;
  }
  if (state.round_number() > state.config.max_rounds) return EndReason::kRoundLimit;
  return std::nullopt;
}

std::array<int, 2> final_scores(const GameState& state) {
  if (!state.finished()) throw Error(Errc::kGameInProgress, "final_scores on unfinished game");
  const RuleConfig& cfg = state.config;
  std::array<int, 2> points{};
  for (Player p : {Player::kA, Player::kB}) {
    const auto& ledger = state.ledger(p);
    int total = ledger.peasants + ledger.mandarins * cfg.mandarin_point_value;
    if (cfg.sweep_at_end) {
      total += state.board.row_peasants(p);
      if (cfg.quan_leftover_to_side_owner) {
        const Pit& quan = state.board[quan_of(p)];
        total += quan.peasants + (quan.has_mandarin ? cfg.mandarin_point_value : 0);
      }
    }
    points[static_cast<std::size_t>(index_of(p))] = total;
  }
  return points;
}

std::optional<Player> winner_of(const std::array<int, 2>& scores) {
  if (scores[0] > scores[1]) return Player::kA;
  if (scores[1] > scores[0]) return Player::kB;
  return std::nullopt;
}

std::uint64_t state_hash(const GameState& state) {
  Fnv1a64 h;
  for (const Pit& pit : state.board.pits) {
    h.update_u32(static_cast<std::uint32_t>(pit.peasants));
    h.update_byte(pit.has_mandarin ? 1 : 0);
  }
  for (const auto& ledger : state.captured) {
    h.update_u32(static_cast<std::uint32_t>(ledger.peasants));
    h.update_byte(static_cast<std::uint8_t>(ledger.mandarins));
  }
  h.update_byte(static_cast<std::uint8_t>(index_of(state.current_player)));
  h.update_u32(static_cast<std::uint32_t>(state.turn_number));
  h.update_byte(state.end_reason ? static_cast<std::uint8_t>(*state.end_reason) : 0);
  return h.digest();
}

std::string_view to_string(Player p) { return p == Player::kA ? "A" : "B"; }
std::string_view to_string(Direction d) { return d == Direction::kLtr ? "LTR" : "RTL"; }

std::string_view to_string(EndReason r) {
  switch (r) {
    case EndReason::kBothMandarinsCaptured: return "BothMandarinsCaptured";
    case EndReason::kNoLegalMoves: return "NoLegalMoves";
    case EndReason::kRoundLimit: return "RoundLimit";
  }
  return "?";
}

std::string_view to_string(MoveEventKind k) {
  switch (k) {
    case MoveEventKind::kDrop: return "Drop";
    case MoveEventKind::kRelayPickup: return "RelayPickup";
    case MoveEventKind::kCapture: return "Capture";
    case MoveEventKind::kTurnEndEmpty: return "TurnEndEmpty";
    case MoveEventKind::kTurnEndQuan: return "TurnEndQuan";
    case MoveEventKind::kTurnEndBlockedQuan: return "TurnEndBlockedQuan";
  }
  return "?";
}

std::optional<Player> parse_player(std::string_view text) {
  if (text == "A") return Player::kA;
  if (text == "B") return Player::kB;
  return std::nullopt;
}

std::optional<Direction> parse_direction(std::string_view text) {
  if (text == "LTR") return Direction::kLtr;
  if (text == "RTL") return Direction::kRtl;
  return std::nullopt;
}

std::optional<EndReason> parse_end_reason(std::string_view text) {
  for (auto r : {EndReason::kBothMandarinsCaptured, EndReason::kNoLegalMoves,
                 EndReason::kRoundLimit}) {
    if (text == to_string(r)) return r;
  }
  return std::nullopt;
}

std::string draw_board(const BoardState& board) {
  auto cell = [&](int pit) {
    std::string s = std::to_string(board[pit].peasants);
    if (board[pit].has_mandarin) s += "+M";
    return s;
  };
  std::ostringstream out;
  out << "      ";
  for (int pit = 11; pit >= 7; --pit) out << "[" << cell(pit) << "] ";
  out << "\n(" << cell(0) << ")";
  out << std::string(28, ' ') << "(" << cell(6) << ")\n      ";
  for (int pit = 1; pit <= 5; ++pit) out << "[" << cell(pit) << "] ";
  out << "\n";
  return out.str();
}

}  // namespace oaq
