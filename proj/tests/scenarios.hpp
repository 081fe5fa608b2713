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

// Hand-traced rule scenarios with their exact event traces.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "oaq/engine.hpp"
#include "test_support.hpp"

namespace oaq::testing {

struct Scenario {
  std::string rule;  // E1..E5 or "pipeline"
  std::string name;
  GameState state;
  Action action;
  std::vector<MoveEvent> events;
  std::function<bool(const GameState& next, const MoveOutcome&)> extra;
};

inline MoveEvent ev_capture(int pit, int amount, bool mandarin = false) {
  return {MoveEventKind::kCapture, pit, amount, mandarin};
}
inline MoveEvent ev_end_empty(int pit) { return {MoveEventKind::kTurnEndEmpty, pit, 0, false}; }
inline MoveEvent ev_end_quan(int pit) { return {MoveEventKind::kTurnEndQuan, pit, 0, false}; }
inline MoveEvent ev_end_blocked(int pit) {
  return {MoveEventKind::kTurnEndBlockedQuan, pit, 0, false};
}
inline MoveEvent ev_relay(int pit, int amount) {
  return {MoveEventKind::kRelayPickup, pit, amount, false};
}

inline std::vector<Scenario> rule_scenarios() {
  std::vector<Scenario> out;
  const auto ltr = Direction::kLtr;

  // E1: a Mandarin pit with fewer than five peasants cannot be taken.
  out.push_back({"E1", "immature Mandarin (4 peasants) is immune",
                 make_state({0, 0, 0, 1, 0, 0, 4, 5, 5, 5, 5, 5}, {true, true}, 9),
                 {3, ltr},
                 concat({drops({4}), {ev_end_blocked(6)}}),
                 [](const GameState& n, const MoveOutcome&) {
                   return n.board[6].has_mandarin && n.board[6].peasants == 4;
                 }});
  out.push_back({"E1", "three peasants: still immune",
                 make_state({0, 0, 0, 1, 0, 0, 3, 5, 5, 5, 5, 5}, {true, true}, 9),
                 {3, ltr},
                 concat({drops({4}), {ev_end_blocked(6)}}),
                 {}});
  out.push_back({"E1", "boundary: five peasants make it mature",
                 make_state({0, 0, 0, 1, 0, 0, 5, 5, 5, 5, 5, 5}, {true, true}, 9),
                 {3, ltr},
                 concat({drops({4}), {ev_capture(6, 5, true)}}),
                 [](const GameState& n, const MoveOutcome& o) {
                   return o.mandarins_captured == 1 && n.ledger(Player::kA).peasants == 5;
                 }});

  // E2: an empty row is refilled from the mover's own captures.
  {
    auto s = make_state({0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, {true, true}, 7);
    s.ledger(Player::kB).peasants = 10;
    out.push_back({"E2", "fires with ten captured", s, {1, Direction::kRtl},
                   concat({drops({0}), {ev_end_empty(11)}}),
                   [](const GameState& n, const MoveOutcome& o) {
                     bool row = true;
                     for (int p = 7; p <= 11; ++p) row = row && n.board[p].peasants == 1;
                     return o.redistributed == Player::kB && n.ledger(Player::kB).peasants == 5 &&
                            row && !n.finished();
                   }});
  }
  {
    auto s = make_state({0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, {true, true}, 7);
    s.ledger(Player::kB).peasants = 5;
    out.push_back({"E2", "boundary: exactly five captured", s, {1, Direction::kRtl},
                   concat({drops({0}), {ev_end_empty(11)}}),
                   [](const GameState& n, const MoveOutcome& o) {
                     return o.redistributed == Player::kB && n.ledger(Player::kB).peasants == 0 &&
                            n.board.row_peasants(Player::kB) == 5;
                   }});
  }
  {
    auto s = make_state({0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, {true, true}, 7);
    s.ledger(Player::kB).peasants = 4;
    out.push_back({"E2", "blocked with four captured: game over", s, {1, Direction::kRtl},
                   concat({drops({0}), {ev_end_empty(11)}}),
                   [](const GameState& n, const MoveOutcome& o) {
                     return !o.redistributed && n.end_reason == EndReason::kNoLegalMoves;
                   }});
  }

  // E3: no Mandarin captures in rounds 1 and 2.
  out.push_back({"E3", "round 2 blocks a mature Mandarin",
                 make_state({0, 0, 0, 1, 0, 0, 6, 5, 5, 5, 5, 5}, {true, true}, 4),
                 {3, ltr},
                 concat({drops({4}), {ev_end_blocked(6)}}),
                 {}});
  out.push_back({"E3", "round 1 blocks from the opening",
                 make_state({0, 0, 0, 1, 0, 0, 9, 0, 0, 5, 5, 5}, {true, true}, 1),
                 {3, ltr},
                 concat({drops({4}), {ev_end_blocked(6)}}),
                 {}});
  out.push_back({"E3", "boundary: round 3 allows the capture",
                 make_state({0, 0, 0, 1, 0, 0, 6, 0, 0, 5, 5, 5}, {true, true}, 5),
                 {3, ltr},
                 concat({drops({4}), {ev_capture(6, 6, true), ev_end_empty(7)}}),
                 {}});

  // E4: two empty pits in a row end the turn.
  out.push_back({"E4", "right after the scatter",
                 make_state({0, 1, 0, 0, 0, 3, 0, 5, 5, 5, 5, 5}),
                 {1, ltr},
                 concat({drops({2}), {ev_end_empty(3)}}),
                 [](const GameState&, const MoveOutcome& o) { return o.peasants_captured == 0; }});
  out.push_back({"E4", "after a capture",
                 make_state({0, 1, 0, 0, 4, 0, 0, 5, 5, 5, 5, 5}, {true, false}),
                 {1, ltr},
                 concat({drops({2}), {ev_capture(4, 4), ev_end_empty(5)}}),
                 {}});
  out.push_back({"E4", "a Quan after the last drop ends the turn instead",
                 make_state({0, 0, 0, 0, 1, 0, 0, 5, 5, 5, 5, 5}),
                 {4, ltr},
                 concat({drops({5}), {ev_end_quan(6)}}),
                 {}});

  // E5: captures chain as long as the pattern repeats.
  out.push_back({"E5", "three captures in a row",
                 make_state({0, 1, 0, 0, 2, 0, 3, 0, 5, 5, 5, 5}, {true, false}),
                 {1, ltr},
                 concat({drops({2}), {ev_capture(4, 2), ev_capture(6, 3), ev_capture(8, 5)}}),
                 [](const GameState&, const MoveOutcome& o) {
                   return o.peasants_captured == 10 && o.step_count == 4;
                 }});
  out.push_back({"E5", "through a Mandarin capture",
                 make_state({0, 1, 0, 0, 3, 0, 5, 0, 0, 5, 5, 5}, {true, true}, 5),
                 {1, ltr},
                 concat({drops({2}), {ev_capture(4, 3), ev_capture(6, 5, true), ev_end_empty(7)}}),
                 [](const GameState& n, const MoveOutcome&) {
                   return n.ledger(Player::kA) == CaptureLedger{8, 1};
                 }});

  out.push_back({"pipeline", "pit 5 LTR from the initial board", new_game(), {5, ltr},
                 concat({drops({6, 7, 8, 9, 10}), {ev_relay(11, 5)}, drops({0, 1, 2, 3, 4}),
                         {ev_end_blocked(6)}}),
                 [](const GameState& n, const MoveOutcome& o) {
                   return o.step_count == 11 &&
                          n.board.peasant_vector() ==
                              std::array<int, 12>{1, 6, 6, 6, 6, 0, 1, 6, 6, 6, 6, 0};
                 }});
  return out;
}

}  // namespace oaq::testing
