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

#include "oaq/arena.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "oaq/error.hpp"
#include "oaq/hash.hpp"
#include "oaq/json_io.hpp"
#include "oaq/llm_agent.hpp"

namespace oaq {

using nlohmann::json;

namespace {

GameResult finished_result(const GameState& state, int ending_round) {
  GameResult r;
  r.end_reason = std::string(to_string(*state.end_reason));
  const auto points = final_scores(state);
  r.points = points;
  r.winner = winner_of(points);
  r.ending_round = ending_round;
  return r;
}

std::string snapshot_text(const BoardSnapshot& s) {
  std::string out = "[";
  for (int i = 0; i < kNumPits; ++i) {
    if (i) out += ",";
    out += std::to_string(s.peasants[static_cast<std::size_t>(i)]);
    if (s.mandarins[static_cast<std::size_t>(i)]) out += "M";
  }
  return out + "]";
}

std::string ledgers_text(const std::array<CaptureLedger, 2>& l) {
  return "A:" + std::to_string(l[0].peasants) + "/" + std::to_string(l[0].mandarins) +
         " B:" + std::to_string(l[1].peasants) + "/" + std::to_string(l[1].mandarins);
}

}  // namespace

void MatchConfig::validate() const {
  agent_a.validate();
  agent_b.validate();
  rule_config.validate();
  if (games < 1) throw Error(Errc::kInvalidConfig, "games must be >= 1");
  if (agent_a.name == agent_b.name) {
    throw Error(Errc::kInvalidConfig, "the two agents need distinct names");
  }
}

std::uint64_t game_seed(std::uint64_t base_seed, std::uint64_t game_index) {
  Fnv1a64 h;
  h.update_u64(base_seed);
  h.update_u64(game_index);
  return h.digest();
}

std::uint64_t agent_seed(std::uint64_t game_seed_value, Player seat,
                         std::optional<std::uint64_t> spec_seed) {
  Fnv1a64 h;
  h.update_u64(game_seed_value);
  h.update_byte(static_cast<std::uint8_t>(index_of(seat)));
  h.update_u64(spec_seed.value_or(0));
  return h.digest();
}

AgentFactory default_agent_factory() {
  return [](const AgentSpec& spec, std::uint64_t seed) -> std::unique_ptr<Agent> {
    if (spec.kind == AgentKind::kLlm) {
      spec.validate();
      return std::make_unique<LlmAgent>(*spec.llm, make_http_transport(*spec.llm), seed);
    }
    return make_scripted_agent(spec, seed);
  };
}

GameLog run_game(const MatchConfig& config, int game_index, const AgentFactory& factory,
                 const TurnCallback& on_turn) {
  config.validate();
  if (game_index < 0 || game_index >= config.games) {
    throw Error(Errc::kInvalidConfig, "game_index out of range");
  }
  const bool swapped = config.swap_sides && game_index % 2 == 1;
  const AgentSpec& spec_a = swapped ? config.agent_b : config.agent_a;
  const AgentSpec& spec_b = swapped ? config.agent_a : config.agent_b;

  GameLog log;
  log.header.artifact_version = OAQ_VERSION;
  log.header.rule_config = config.rule_config;
  log.header.agent_a = config.agent_a;
  log.header.agent_b = config.agent_b;
  log.header.seats = {spec_a.name, spec_b.name};
  log.header.base_seed = config.base_seed;
  log.header.game_index = game_index;
  log.header.seed = game_seed(config.base_seed, static_cast<std::uint64_t>(game_index));

  const std::array<std::unique_ptr<Agent>, 2> agents = {
      factory(spec_a, agent_seed(log.header.seed, Player::kA, spec_a.seed)),
      factory(spec_b, agent_seed(log.header.seed, Player::kB, spec_b.seed))};

  GameState state = new_game(config.rule_config);
  std::optional<TurnSummary> previous;
  try {
    while (!state.finished()) {
      const Player mover = state.current_player;
      AgentDecision decision =
          agents[static_cast<std::size_t>(index_of(mover))]->decide(state, previous);
      auto [next, outcome] = apply_move(state, decision.action);

      TurnRecord rec;
      rec.turn_number = state.turn_number;
      rec.round_number = state.round_number();
      rec.mover = mover;
      rec.board_before = BoardSnapshot::of(state.board);
      rec.action = decision.action;
      rec.reason = decision.reason;
      rec.fallback_used = decision.fallback_used;
      rec.attempts = decision.attempts;
      rec.step_count = outcome.step_count;
      rec.peasants_captured = outcome.peasants_captured;
      rec.mandarins_captured = outcome.mandarins_captured;
      rec.board_after = BoardSnapshot::of(next.board);
      rec.ledgers_after = next.captured;
      rec.state_hash_after = state_hash(next);
      rec.exchanges = std::move(decision.exchanges);

      previous = TurnSummary{mover, rec.action, rec.reason,
                             immediate_points(outcome, config.rule_config)};
      state = std::move(next);
      log.turns.push_back(std::move(rec));
      if (on_turn) on_turn(log.turns.back(), state);
    }
    log.result = finished_result(state, log.turns.empty() ? 0 : log.turns.back().round_number);
  } catch (const TransportError& e) {
    log.result.end_reason = std::string(kAbortedReason);
    log.result.ending_round = log.turns.empty() ? 0 : log.turns.back().round_number;
    log.result.error = e.what();
  }
  return log;
}

std::string log_file_name(int game_index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "game_%05d.jsonl", game_index);
  return buf;
}

TournamentSummary run_tournament(const MatchConfig& config,
                                 const std::filesystem::path& output_dir,
                                 const TournamentOptions& options) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec || !std::filesystem::is_directory(output_dir)) {
    throw Error(Errc::kIo, "cannot create output directory " + output_dir.string());
  }

  struct Slot {
    GameResult result;
    std::array<std::string, 2> seats;
    std::uint64_t seed = 0;
    std::string digest;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(config.games));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::atomic<bool> stop{false};

  auto worker = [&] {
    while (!stop) {
      const int i = next.fetch_add(1);
      if (i >= config.games) return;
      try {
        const TurnCallback cb = options.workers == 1 ? options.on_turn : TurnCallback{};
        GameLog log = run_game(config, i, options.factory, cb);
        const std::string text = to_jsonl(log);
        const auto path = output_dir / log_file_name(i);
        write_file_atomic(path, text);
        const auto report = replay(read_game_log(path));
        if (!report.verified()) {
          throw Error(Errc::kMalformedLog, path.string() + " failed replay at turn " +
                                               std::to_string(report.divergence->turn) + " (" +
                                               report.divergence->field + ")");
        }
        Slot& slot = slots[static_cast<std::size_t>(i)];
        slot.result = log.result;
        slot.seats = log.header.seats;
        slot.seed = log.header.seed;
        slot.digest = hex_digest(fnv1a64(text));
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    }
  };

  const int workers = std::max(1, std::min(options.workers, config.games));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  TournamentSummary summary;
  summary.games = config.games;
  long points_a = 0;
  long points_b = 0;
  json logs = json::array();
  for (int i = 0; i < config.games; ++i) {
    const Slot& slot = slots[static_cast<std::size_t>(i)];
    std::string winner_agent;
    if (slot.result.aborted()) {
      ++summary.aborts;
    } else {
      const int a_seat = slot.seats[0] == config.agent_a.name ? 0 : 1;
      points_a += (*slot.result.points)[static_cast<std::size_t>(a_seat)];
      points_b += (*slot.result.points)[static_cast<std::size_t>(1 - a_seat)];
      if (!slot.result.winner) {
        ++summary.draws;
        winner_agent = "draw";
      } else {
        winner_agent = slot.seats[static_cast<std::size_t>(index_of(*slot.result.winner))];
        (winner_agent == config.agent_a.name ? summary.wins_a : summary.wins_b)++;
      }
    }
    summary.log_files.push_back(output_dir / log_file_name(i));
    logs.push_back({{"file", log_file_name(i)},
                    {"game_index", i},
                    {"seed", slot.seed},
                    {"digest", slot.digest},
                    {"end_reason", slot.result.end_reason},
                    {"winner", slot.result.aborted() ? json(nullptr) : json(winner_agent)}});
  }
  const int counted = summary.games - summary.aborts;
  if (counted > 0) {
    summary.mean_points_a = static_cast<double>(points_a) / counted;
    summary.mean_points_b = static_cast<double>(points_b) / counted;
  }

  json manifest = {{"artifact_version", OAQ_VERSION},
                   {"games", config.games},
                   {"base_seed", config.base_seed},
                   {"seed_mixing", "fnv1a64(base_seed_le64 || game_index_le64)"},
                   {"swap_sides", config.swap_sides},
                   {"rule_config", rule_config_to_json(config.rule_config)},
                   {"agent_a", agent_spec_to_json(config.agent_a)},
                   {"agent_b", agent_spec_to_json(config.agent_b)},
                   {"logs", std::move(logs)},
                   {"summary",
                    {{"wins_a", summary.wins_a},
                     {"wins_b", summary.wins_b},
                     {"draws", summary.draws},
                     {"aborts", summary.aborts},
                     {"mean_points_a", summary.mean_points_a},
                     {"mean_points_b", summary.mean_points_b}}}};
  const std::string text = manifest.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
  summary.manifest_path = output_dir / kManifestFile;
  write_file_atomic(summary.manifest_path, text);
  summary.manifest_digest = hex_digest(fnv1a64(text));
  return summary;
}

ReplayReport replay(const GameLog& log, const std::optional<RuleConfig>& rule_config_override) {
  ReplayReport report;
  auto diverge = [&](int turn, std::string field, std::string expected, std::string actual) {
    report.divergence = Divergence{turn, std::move(field), std::move(expected), std::move(actual)};
    return report;
  };

  GameState state = new_game(rule_config_override.value_or(log.header.rule_config));
  for (const TurnRecord& rec : log.turns) {
    const int t = report.turns_checked + 1;
    if (state.finished()) return diverge(t, "turn_number", "game over", std::to_string(t));
    if (rec.turn_number != state.turn_number) {
      return diverge(t, "turn_number", std::to_string(state.turn_number), std::to_string(t));
    }
    if (rec.round_number != state.round_number()) {
      return diverge(t, "round_number", std::to_string(state.round_number()),
                     std::to_string(rec.round_number));
    }
    if (rec.mover != state.current_player) {
      return diverge(t, "mover", std::string(to_string(state.current_player)),
                     std::string(to_string(rec.mover)));
    }
    const auto before = BoardSnapshot::of(state.board);
    if (rec.board_before != before) {
      return diverge(t, "board_before", snapshot_text(before), snapshot_text(rec.board_before));
    }
    std::pair<GameState, MoveOutcome> applied;
    try {
      applied = apply_move(state, rec.action);
    } catch (const Error& e) {
      return diverge(t, "action", "a legal action", e.what());
    }
    auto& [next, outcome] = applied;
    report.step_counts.push_back(outcome.step_count);
    if (rec.step_count != outcome.step_count) {
      return diverge(t, "step_count", std::to_string(outcome.step_count),
                     std::to_string(rec.step_count));
    }
    if (rec.peasants_captured != outcome.peasants_captured) {
      return diverge(t, "peasants_captured", std::to_string(outcome.peasants_captured),
                     std::to_string(rec.peasants_captured));
    }
    if (rec.mandarins_captured != outcome.mandarins_captured) {
      return diverge(t, "mandarins_captured", std::to_string(outcome.mandarins_captured),
                     std::to_string(rec.mandarins_captured));
    }
    const auto after = BoardSnapshot::of(next.board);
    if (rec.board_after != after) {
      return diverge(t, "board_after", snapshot_text(after), snapshot_text(rec.board_after));
    }
    if (rec.ledgers_after != next.captured) {
      return diverge(t, "ledgers_after", ledgers_text(next.captured),
                     ledgers_text(rec.ledgers_after));
    }
    const auto hash = state_hash(next);
    if (rec.state_hash_after != hash) {
      return diverge(t, "state_hash_after", hex_digest(hash), hex_digest(rec.state_hash_after));
    }
    if (rec.record_digest) {
      const auto digest = compute_record_digest(rec);
      if (*rec.record_digest != digest) {
        return diverge(t, "record_digest", hex_digest(digest), hex_digest(*rec.record_digest));
      }
    }
    state = std::move(next);
    ++report.turns_checked;
  }

  const GameResult& r = log.result;
  const int last_round = log.turns.empty() ? 0 : log.turns.back().round_number;
  if (r.ending_round != last_round) {
    return diverge(0, "result.ending_round", std::to_string(last_round),
                   std::to_string(r.ending_round));
  }
  if (r.aborted()) return report;
  if (!state.finished()) return diverge(0, "result.end_reason", "InProgress", r.end_reason);
  const GameResult expected = finished_result(state, last_round);
  if (r.end_reason != expected.end_reason) {
    return diverge(0, "result.end_reason", expected.end_reason, r.end_reason);
  }
  auto points_text = [](const std::optional<std::array<int, 2>>& p) {
    return p ? std::to_string((*p)[0]) + "-" + std::to_string((*p)[1]) : std::string("null");
  };
  if (r.points != expected.points) {
    return diverge(0, "result.points", points_text(expected.points), points_text(r.points));
  }
  if (r.winner != expected.winner) {
    auto w = [](const std::optional<Player>& p) {
      return p ? std::string(to_string(*p)) : std::string("draw");
    };
    return diverge(0, "result.winner", w(expected.winner), w(r.winner));
  }
  return report;
}

}  // namespace oaq
