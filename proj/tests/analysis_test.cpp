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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "log_support.hpp"
#include "mock_llm.hpp"
#include "oaq/analysis.hpp"
#include "oaq/error.hpp"

using namespace oaq;
using oaq::testing::match;
using oaq::testing::ScriptedTransport;
using oaq::testing::synthetic_log;
using oaq::testing::TempDir;
using nlohmann::json;

namespace {

// wins, draws, then losses for the focal agent, alternating its seat.
std::vector<GameLog> outcome_logs(int wins, int draws, int losses) {
  std::vector<GameLog> logs;
  int i = 0;
  auto add = [&](std::optional<bool> w, int pts) {
    logs.push_back(synthetic_log("focal", "rival", i, w, pts, 12, i % 2 == 0));
    ++i;
  };
  for (int k = 0; k < wins; ++k) add(true, 40);
  for (int k = 0; k < draws; ++k) add(std::nullopt, 35);
  for (int k = 0; k < losses; ++k) add(false, 30);
  return logs;
}

LlmAgentConfig classifier(const std::string& model = "judge") {
  LlmAgentConfig c;
  c.endpoint_url = "http://127.0.0.1:1/v1/chat/completions";
  c.model_name = model;
  c.persona = *find_builtin_persona("Balanced");
  return c;
}

std::vector<GameLog> played_logs(int games, std::uint64_t seed) {
  const auto m = match(AgentKind::kRandom, AgentKind::kGreedy, games, seed);
  std::vector<GameLog> logs;
  for (int g = 0; g < games; ++g) logs.push_back(parse_game_log(to_jsonl(run_game(m, g))));
  return logs;
}

TurnRecord pipeline_turn() {
  const GameState s = new_game();
  const auto [next, out] = apply_move(s, {5, Direction::kLtr});
  TurnRecord t;
  t.turn_number = 1;
  t.round_number = 1;
  t.mover = Player::kA;
  t.board_before = BoardSnapshot::of(s.board);
  t.action = {5, Direction::kLtr};
  t.reason = "line one\n\n  line two\n";
  t.step_count = out.step_count;
  t.board_after = BoardSnapshot::of(next.board);
  t.ledgers_after = next.captured;
  t.state_hash_after = state_hash(next);
  return t;
}

}  // namespace

TEST_CASE("percentages round half-up from exact counts") {
  CHECK(percentage(19, 50, 1) == 38.0);
  CHECK(percentage(11, 50, 1) == 22.0);
  CHECK(percentage(12, 50, 1) == 24.0);
  CHECK(percentage(0, 50, 1) == 0.0);
  CHECK(percentage(1, 8, 1) == 12.5);
  CHECK(percentage(1, 16, 1) == 6.3);
  CHECK(percentage(1, 3, 2) == 33.33);
  CHECK(percentage(2, 3, 2) == 66.67);
  CHECK(percentage(1, 1, 2) == 100.0);
  CHECK_THROWS_AS(percentage(1, 0, 1), Error);
}

TEST_CASE("win and draw rates") {
  auto r = win_draw_rates(outcome_logs(19, 11, 20), "focal");
  CHECK(r.games == 50);
  CHECK(r.win_pct == 38.0);
  CHECK(r.draw_pct == 22.0);
  CHECK(r.loss_pct == 40.0);

  r = win_draw_rates(outcome_logs(12, 12, 26), "focal");
  CHECK(r.win_pct == 24.0);
  CHECK(r.draw_pct == 24.0);

  r = win_draw_rates(outcome_logs(0, 0, 50), "focal");
  CHECK(r.win_pct == 0.0);
  CHECK(r.draw_pct == 0.0);
  CHECK(r.loss_pct == 100.0);

  r = win_draw_rates(outcome_logs(1, 1, 1), "focal");
  CHECK(r.win_pct + r.draw_pct + r.loss_pct == doctest::Approx(100.0).epsilon(0.001));
}

TEST_CASE("rates exclude aborted games and reject bad input") {
  auto logs = outcome_logs(3, 1, 0);
  GameLog aborted = logs.front();
  aborted.result = GameResult{};
  aborted.result.end_reason = std::string(kAbortedReason);
  logs.push_back(aborted);
  const auto r = win_draw_rates(logs, "focal");
  CHECK(r.games == 4);
  CHECK(r.aborted == 1);
  CHECK(r.win_pct == 75.0);

  CHECK_THROWS_AS(win_draw_rates({}, "focal"), Error);
  CHECK_THROWS_AS(win_draw_rates(logs, "nobody"), Error);
  try {
    win_draw_rates({aborted}, "focal");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kEmptyInput);
  }
}

TEST_CASE("phase boundaries") {
  CHECK_FALSE(phase_of(0).has_value());
  CHECK(phase_of(1) == Phase::kEge);
  CHECK(phase_of(10) == Phase::kEge);
  CHECK(phase_of(11) == Phase::kMge);
  CHECK(phase_of(20) == Phase::kMge);
  CHECK(phase_of(21) == Phase::kLge);
  CHECK(phase_of(25) == Phase::kLge);
}

TEST_CASE("phase scores worked example") {
  const std::vector<GameLog> logs = {
      synthetic_log("focal", "rival", 0, true, 28, 8),
      synthetic_log("focal", "rival", 1, true, 30, 8, false),
      synthetic_log("focal", "rival", 2, false, 20, 22),
  };
  const auto p = phase_scores(logs, "focal");
  REQUIRE(p.mean[0].has_value());
  CHECK(*p.mean[0] == 29.0);
  CHECK_FALSE(p.mean[1].has_value());
  REQUIRE(p.mean[2].has_value());
  CHECK(*p.mean[2] == 20.0);
  CHECK(p.overall == 26.0);
  CHECK(p.games == std::array<int, 3>{2, 0, 1});
}

TEST_CASE("phase scores when every game runs the distance") {
  std::vector<GameLog> logs;
  for (int i = 0; i < 5; ++i) logs.push_back(synthetic_log("focal", "rival", i, std::nullopt, 35, 25));
  const auto p = phase_scores(logs, "focal");
  CHECK_FALSE(p.mean[0].has_value());
  CHECK_FALSE(p.mean[1].has_value());
  CHECK(*p.mean[2] == 35.0);
  CHECK(p.overall == 35.0);
}

TEST_CASE("phase means may be fractional while game scores are integers") {
  const std::vector<GameLog> logs = {synthetic_log("focal", "rival", 0, true, 23, 5),
                                     synthetic_log("focal", "rival", 1, true, 24, 5)};
  CHECK(*phase_scores(logs, "focal").mean[0] == 23.5);
}

TEST_CASE("distribution summary") {
  const auto d = describe({4, 1, 3, 2});
  REQUIRE(d.has_value());
  CHECK(d->min == 1);
  CHECK(d->max == 4);
  CHECK(d->q1 == 1.75);
  CHECK(d->median == 2.5);
  CHECK(d->q3 == 3.25);
  CHECK(d->mean == 2.5);
  const auto one = describe({7});
  CHECK(one->q1 == 7);
  CHECK(one->q3 == 7);
  CHECK_FALSE(describe({}).has_value());
}

TEST_CASE("reasoning length counts nonempty lines") {
  CHECK(reasoning_length("") == 0);
  CHECK(reasoning_length("one") == 1);
  CHECK(reasoning_length("one\n\n  \ntwo\n") == 2);
  CHECK(reasoning_length("a\nb\nc") == 3);
}

TEST_CASE("planning depth from the pipeline fixture") {
  GameLog log = synthetic_log("focal", "rival", 0, true, 40, 1);
  log.turns.push_back(pipeline_turn());
  const auto rows = planning_depth({log}, "focal");
  REQUIRE(rows.size() == 25);
  CHECK(rows[0].count == 1);
  CHECK(rows[0].steps->median == 11);
  CHECK(rows[0].reasoning_length->median == 2);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    CHECK(rows[r].count == 0);
    CHECK_FALSE(rows[r].steps.has_value());
  }
  // The opponent's moves are not sampled.
  CHECK(planning_depth({log}, "rival")[0].count == 0);
}

TEST_CASE("planning depth collapses for constant step counts") {
  std::vector<GameLog> logs;
  for (int g = 0; g < 3; ++g) {
    GameLog log = synthetic_log("focal", "rival", g, true, 40, 25);
    for (int turn = 1; turn <= 50; ++turn) {
      TurnRecord t;
      t.turn_number = turn;
      t.round_number = (turn + 1) / 2;
      t.mover = turn % 2 ? Player::kA : Player::kB;
      t.step_count = t.mover == Player::kA ? 6 : 99;
      log.turns.push_back(t);
    }
    logs.push_back(log);
  }
  for (const auto& row : planning_depth(logs, "focal")) {
    CHECK(row.count == 3);
    CHECK(row.steps->min == 6);
    CHECK(row.steps->q1 == 6);
    CHECK(row.steps->median == 6);
    CHECK(row.steps->q3 == 6);
    CHECK(row.steps->max == 6);
    CHECK(row.steps->mean == 6);
  }
}

TEST_CASE("planning depth equals the replayed step counts") {
  const auto logs = played_logs(10, 4);
  std::vector<std::vector<int>> by_round(25);
  for (const auto& log : logs) {
    const auto r = replay(log);
    REQUIRE(r.verified());
    for (std::size_t i = 0; i < log.turns.size(); ++i) {
      const auto& t = log.turns[i];
      if (t.mover == Player::kA && t.round_number <= 25) {
        by_round[static_cast<std::size_t>(t.round_number - 1)].push_back(r.step_counts[i]);
      }
    }
  }
  const auto rows = planning_depth(logs, "alpha");
  for (std::size_t k = 0; k < 25; ++k) {
    CHECK(rows[k].count == static_cast<int>(by_round[k].size()));
    const auto d = describe(by_round[k]);
    CHECK(d.has_value() == rows[k].steps.has_value());
    if (d) {
      CHECK(d->median == rows[k].steps->median);
      CHECK(d->max == rows[k].steps->max);
    }
  }
}

TEST_CASE("label detection takes the first label mentioned") {
  CHECK(find_label("LONG_TERM_STRATEGY\nnot SHORT_TERM_GAIN") == ReasoningLabel::kLongTermStrategy);
  CHECK(find_label("It is **SHORT_TERM_GAIN**, maybe AMBIGUOUS") == ReasoningLabel::kShortTermGain);
  CHECK(find_label("Label: AMBIGUOUS") == ReasoningLabel::kAmbiguous);
  CHECK_FALSE(find_label("short term gain").has_value());
  CHECK_FALSE(find_label("").has_value());
}

TEST_CASE("classification prompt") {
  const std::string p = classification_prompt("Take the four peasants now.");
  CHECK(p.find("Reasoning: Take the four peasants now.") != std::string::npos);
  for (auto l : kReasoningLabels) CHECK(p.find(to_string(l)) != std::string::npos);
  CHECK(p.find("<think>") == std::string::npos);
}

TEST_CASE("classification with a constant mock") {
  const auto logs = played_logs(8, 21);
  auto t = ScriptedTransport::replies({"LONG_TERM_STRATEGY\nThe move **sets up** a capture."});
  const auto r = classify_reasoning(logs, classifier(), *t);
  std::size_t turns = 0;
  for (const auto& log : logs) turns += log.turns.size();
  CHECK(r.turns.size() == turns);
  CHECK(t->calls() == static_cast<int>(turns));
  CHECK(r.overall.labeled == static_cast<int>(turns));
  CHECK(r.overall.pct == std::array<double, 3>{0.0, 100.0, 0.0});
  REQUIRE(r.per_round.size() == 25);
  CHECK(r.per_round[0].labeled == 16);
  CHECK(t->requests().front().messages[0].content.find("Reasoning: random choice") !=
        std::string::npos);
}

TEST_CASE("classification counts errors and excludes fallback turns by default") {
  auto logs = played_logs(4, 8);
  int fallbacks = 0;
  for (auto& log : logs) {
    for (auto& turn : log.turns) {
      if (turn.turn_number % 5 == 0) {
        turn.fallback_used = true;
        ++fallbacks;
      }
    }
  }
  auto t = std::make_shared<ScriptedTransport>([](const ChatRequest&, int call) -> std::string {
    switch (call % 4) {
      case 0: return "SHORT_TERM_GAIN";
      case 1: return "LONG_TERM_STRATEGY";
      case 2: return "AMBIGUOUS";
      default: return "I cannot tell.";
    }
  });
  const auto r = classify_reasoning(logs, classifier(), *t);
  CHECK(r.excluded_fallback == fallbacks);
  CHECK(r.overall.labeled + r.overall.errors == static_cast<int>(r.turns.size()));
  CHECK(r.overall.errors > 0);
  const double sum = r.overall.pct[0] + r.overall.pct[1] + r.overall.pct[2];
  CHECK(sum == doctest::Approx(100.0).epsilon(0.001));
  for (const auto& lt : r.turns) CHECK_FALSE(lt.fallback_used);

  ClassifyOptions with;
  with.include_fallback = true;
  const auto all = classify_reasoning(logs, classifier(), *t, with);
  CHECK(all.turns.size() == r.turns.size() + static_cast<std::size_t>(fallbacks));

  ClassifyOptions focal;
  focal.focal = "beta";
  const auto only = classify_reasoning(logs, classifier(), *t, focal);
  for (const auto& lt : only.turns) CHECK(lt.agent == "beta");
}

TEST_CASE("classification cache avoids repeat calls") {
  TempDir dir;
  const auto logs = played_logs(3, 2);
  ClassifyOptions options;
  options.cache_path = dir / "cache.jsonl";
  options.workers = 3;
  auto first = ScriptedTransport::replies({"SHORT_TERM_GAIN"});
  const auto a = classify_reasoning(logs, classifier(), *first, options);
  CHECK(first->calls() == static_cast<int>(a.turns.size()));
  CHECK(a.cache_hits == 0);

  auto second = ScriptedTransport::replies({"AMBIGUOUS"});
  const auto b = classify_reasoning(logs, classifier(), *second, options);
  CHECK(second->calls() == 0);
  CHECK(b.endpoint_calls == 0);
  CHECK(b.cache_hits == static_cast<int>(a.turns.size()));
  CHECK(b.overall.pct == a.overall.pct);

  auto other_model = ScriptedTransport::replies({"AMBIGUOUS"});
  const auto c = classify_reasoning(logs, classifier("judge-2"), *other_model, options);
  CHECK(other_model->calls() == static_cast<int>(a.turns.size()));
  CHECK(c.overall.pct[2] == 100.0);
}

TEST_CASE("classification transport failures propagate") {
  auto t = std::make_shared<ScriptedTransport>(
      [](const ChatRequest&, int) -> std::string { throw TransportError("no route"); });
  CHECK_THROWS_AS(classify_reasoning(played_logs(1, 1), classifier(), *t), TransportError);
}

TEST_CASE("reports are deterministic and both formats agree") {
  TempDir a;
  TempDir b;
  const auto logs = played_logs(12, 31);
  auto report = build_report(logs, "beta");
  auto t = ScriptedTransport::replies({"SHORT_TERM_GAIN"});
  report.reasoning = classify_reasoning(logs, classifier(), *t);
  const auto fa = emit_report(report, ReportFormat::kBoth, a.path());
  const auto fb = emit_report(report, ReportFormat::kBoth, b.path());
  REQUIRE(fa.size() == 6);
  for (std::size_t i = 0; i < fa.size(); ++i) {
    CHECK(fa[i].filename() == fb[i].filename());
    CHECK(read_file(fa[i]) == read_file(fb[i]));
  }

  const json j = json::parse(read_file(a / "report.json"));
  CHECK(j == report_to_json(report));
  CHECK(j["rates"]["games"] == 12);
  CHECK(j["planning_depth"].size() == 25);

  const auto depth = oaq::testing::split_lines(read_file(a / "depth.csv"));
  CHECK(depth.size() == 26);
  const auto rates = oaq::testing::split_lines(read_file(a / "rates.csv"));
  REQUIRE(rates.size() == 2);
  const std::string expected = "beta,12," + std::to_string(report.rates.aborted) + "," +
                               std::to_string(report.rates.wins) + "," +
                               std::to_string(report.rates.draws) + "," +
                               std::to_string(report.rates.losses) + "," +
                               j["rates"]["win_pct"].dump() + "," + j["rates"]["draw_pct"].dump() +
                               "," + j["rates"]["loss_pct"].dump();
  CHECK(rates[1] == expected);
}

TEST_CASE("report rejects logs that fail replay") {
  auto logs = played_logs(2, 3);
  logs[1].turns[0].board_after.peasants[1] += 1;
  CHECK_THROWS_AS(build_report(logs, "alpha"), Error);
}

TEST_CASE("load_logs reads a tournament directory") {
  TempDir dir;
  run_tournament(match(AgentKind::kRandom, AgentKind::kRandom, 5, 1), dir.path());
  const auto logs = load_logs(dir.path());
  CHECK(logs.size() == 5);
  CHECK(logs[3].header.game_index == 3);
  CHECK(default_focal(logs) == "alpha");
  TempDir empty;
  CHECK_THROWS_AS(load_logs(empty.path()), Error);
}
