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

#include "oaq/agents.hpp"

#include <limits>
#include <random>

#include "oaq/error.hpp"
#include "oaq/hash.hpp"

namespace oaq {
namespace {

void require_playable(const GameState& state, const std::vector<Action>& actions) {
  if (state.finished() || actions.empty()) {
    throw Error(Errc::kNoLegalActions, "agent asked to move with no legal actions");
  }
}

std::string describe(const Action& a, const GameState& state) {
  return "position " + std::to_string(relative_position(state.current_player, a.pit)) + " (pit " +
         std::to_string(a.pit) + ") " + std::string(to_string(a.direction));
}

class Negamax {
 public:
  Negamax(int point_value, long budget) : point_value_(point_value), budget_(budget) {}

  // Best net captured points for the side to move over `depth` plies.
  int value(const GameState& s, int depth, int alpha, int beta) {
    if (depth == 0 || s.finished()) return 0;
    int best = std::numeric_limits<int>::min() / 2;
    for (const Action& a : legal_actions(s)) {
      const int v = score(s, a, depth, alpha, beta);
      if (v > best) best = v;
      if (best > alpha) alpha = best;
      if (alpha >= beta) break;
    }
    return best;
  }

  int score(const GameState& s, const Action& a, int depth, int alpha, int beta) {
    if (++nodes_ > budget_) {
      throw Error(Errc::kSearchBudgetExceeded,
                  "search exceeded " + std::to_string(budget_) + " nodes");
    }
    auto [next, outcome] = apply_move(s, a);
    const int gain = outcome.peasants_captured + outcome.mandarins_captured * point_value_;
    return gain - value(next, depth - 1, gain - beta, gain - alpha);
  }

 private:
  int point_value_;
  long budget_;
  long nodes_ = 0;
};

}  // namespace

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::kRandom: return "random";
    case AgentKind::kGreedy: return "greedy";
    case AgentKind::kSearch: return "search";
    case AgentKind::kLlm: return "llm";
  }
  return "?";
}

std::optional<AgentKind> parse_agent_kind(std::string_view text) {
  for (auto k : {AgentKind::kRandom, AgentKind::kGreedy, AgentKind::kSearch, AgentKind::kLlm}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

void AgentSpec::validate() const {
  auto fail = [&](const std::string& why) {
    throw Error(Errc::kInvalidConfig, "agent '" + name + "': " + why);
  };
  if (name.empty()) fail("name must be nonempty");
  if (kind == AgentKind::kSearch) {
    if (!depth || *depth < 1) fail("search agents need depth >= 1");
  } else if (depth) {
    fail("depth is only valid for search agents");
  }
  if (kind == AgentKind::kLlm) {
    if (!llm) fail("llm agents need an llm block");
    llm->validate();
  } else if (llm) {
    fail("llm block is only valid for llm agents");
  }
}

int immediate_points(const MoveOutcome& outcome, const RuleConfig& config) {
  return outcome.peasants_captured + outcome.mandarins_captured * config.mandarin_point_value;
}

std::size_t seeded_index(std::uint64_t seed, const GameState& state, std::size_t n) {
  Fnv1a64 h;
  h.update_u64(seed);
  h.update_u64(state_hash(state));
  std::mt19937_64 gen(h.digest());
  // Rejection sampling keeps the draw uniform and independent of the
  // standard library's distribution implementation.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = gen();
  while (x >= limit) x = gen();
  return static_cast<std::size_t>(x % n);
}

AgentDecision random_decision(std::uint64_t seed, const GameState& state) {
  const auto actions = legal_actions(state);
  require_playable(state, actions);
  AgentDecision d;
  d.action = actions[seeded_index(seed, state, actions.size())];
  d.reason = "random choice";
  return d;
}

AgentDecision greedy_decision(const GameState& state) {
  const auto actions = legal_actions(state);
  require_playable(state, actions);
  int best = -1;
  Action chosen = actions.front();
  for (const Action& a : actions) {
    const int points = immediate_points(apply_move(state, a).second, state.config);
    if (points > best) {
      best = points;
      chosen = a;
    }
  }
  AgentDecision d;
  d.action = chosen;
  d.reason = "greedy: " + describe(chosen, state) + " captures " + std::to_string(best) +
             " points (best of " + std::to_string(actions.size()) + ")";
  return d;
}

AgentDecision search_decision(const GameState& state, int depth, long node_budget) {
  if (depth < 1) throw Error(Errc::kInvalidConfig, "search depth must be >= 1");
  const auto actions = legal_actions(state);
  require_playable(state, actions);
  Negamax search(state.config.mandarin_point_value, node_budget);
  constexpr int kInf = std::numeric_limits<int>::max() / 2;
  int best = -kInf;
  Action chosen = actions.front();
  for (const Action& a : actions) {
    // Window (best, +inf): a child that cannot beat `best` strictly is cut,
    // which is exactly what the first-wins tie-break needs.
    const int v = search.score(state, a, depth, best, kInf);
    if (v > best) {
      best = v;
      chosen = a;
    }
  }
  AgentDecision d;
  d.action = chosen;
  d.reason = "search depth " + std::to_string(depth) + ": " + describe(chosen, state) +
             ", net " + std::to_string(best) + " points over the horizon";
  return d;
}

std::unique_ptr<Agent> make_scripted_agent(const AgentSpec& spec, std::uint64_t seed) {
  spec.validate();
  switch (spec.kind) {
    case AgentKind::kRandom: return std::make_unique<RandomAgent>(seed);
    case AgentKind::kGreedy: return std::make_unique<GreedyAgent>();
    case AgentKind::kSearch: return std::make_unique<SearchAgent>(*spec.depth);
    case AgentKind::kLlm: break;
  }
  throw Error(Errc::kInvalidConfig, "agent '" + spec.name + "' is not a scripted agent");
}

}  // namespace oaq
