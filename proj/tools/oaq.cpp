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

// Command-line entry point: play, tournament, replay, analyze, classify.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oaq/analysis.hpp"
#include "oaq/arena.hpp"
#include "oaq/error.hpp"
#include "oaq/game_log.hpp"
#include "oaq/llm_agent.hpp"
#include "oaq/run_config.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> workers;
};

oaq::RunConfig load_config(const GlobalFlags& g) {
  oaq::RunConfig c = g.config.empty() ? oaq::RunConfig::defaults() : oaq::load_run_config(g.config);
  if (g.seed) c.match.base_seed = *g.seed;
  if (g.workers) c.workers = *g.workers;
  if (!g.out.empty()) c.output_dir = g.out;
  c.validate();
  oaq::set_global_in_flight_limit(c.llm_max_in_flight);
  return c;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string action_text(const oaq::Action& a) {
  return "pit " + std::to_string(a.pit) + " " + std::string(oaq::to_string(a.direction));
}

std::string result_line(const oaq::GameLog& log) {
  const auto& r = log.result;
  if (r.aborted()) return "Result: aborted in round " + std::to_string(r.ending_round) + ": " + r.error;
  const auto& seats = log.header.seats;
  const auto& p = *r.points;
  std::string who = r.winner ? "winner " + seats[static_cast<std::size_t>(oaq::index_of(*r.winner))] +
                                   " (" + std::string(oaq::to_string(*r.winner)) + ")"
                             : std::string("draw");
  return "Result: " + who + ", " + seats[0] + " (A) " + std::to_string(p[0]) + " - " + seats[1] +
         " (B) " + std::to_string(p[1]) + ", " + r.end_reason + " in round " +
         std::to_string(r.ending_round);
}

void print_turn(const oaq::TurnRecord& t, const oaq::GameState& after,
                const std::array<std::string, 2>& seats) {
  const auto& name = seats[static_cast<std::size_t>(oaq::index_of(t.mover))];
  std::cout << "Turn " << t.turn_number << " (round " << t.round_number << ") "
            << oaq::to_string(t.mover) << " " << name << ": " << action_text(t.action) << ", "
            << t.step_count << " steps, captured " << t.peasants_captured << " peasants and "
            << t.mandarins_captured << " mandarins";
  if (t.fallback_used) std::cout << " [fallback after " << t.attempts << " attempts]";
  std::cout << "\n";
  if (!t.reason.empty()) std::cout << "  reason: " << t.reason << "\n";
  std::cout << oaq::draw_board(after.board) << "\n";
}

int cmd_play(const GlobalFlags& g) {
  oaq::RunConfig c = load_config(g);
  oaq::MatchConfig m = c.match;
  m.games = 1;
  const std::array<std::string, 2> seats = {m.agent_a.name, m.agent_b.name};
  std::cout << seats[0] << " (A) vs " << seats[1] << " (B), seed " << oaq::game_seed(m.base_seed, 0)
            << "\n"
            << oaq::draw_board(oaq::new_game(m.rule_config).board) << "\n";
  oaq::TournamentOptions options;
  options.on_turn = [&](const oaq::TurnRecord& t, const oaq::GameState& s) {
    print_turn(t, s, seats);
  };
  const auto summary = oaq::run_tournament(m, c.output_dir, options);
  const auto log = oaq::read_game_log(summary.log_files.front());
  std::cout << "Log: " << summary.log_files.front().string() << "\n" << result_line(log) << "\n";
  return log.result.aborted() ? kExitRuntime : kExitOk;
}

int cmd_tournament(const GlobalFlags& g, std::optional<int> games) {
  oaq::RunConfig c = load_config(g);
  if (games) c.match.games = *games;
  c.match.validate();
  oaq::TournamentOptions options;
  options.workers = c.workers;
  const auto s = oaq::run_tournament(c.match, c.output_dir, options);

  const auto& a = c.match.agent_a.name;
  const auto& b = c.match.agent_b.name;
  const std::size_t w = std::max<std::size_t>({a.size(), b.size(), 8});
  auto pad = [w](const std::string& x) { return x + std::string(w + 2 - x.size(), ' '); };
  auto wins = [](int n) {
    const std::string x = std::to_string(n);
    return x + std::string(x.size() < 6 ? 6 - x.size() : 1, ' ');
  };
  std::cout << pad("agent") << "wins  mean_points\n"
            << pad(a) << wins(s.wins_a) << fixed(s.mean_points_a, 2) << "\n"
            << pad(b) << wins(s.wins_b) << fixed(s.mean_points_b, 2) << "\n"
            << "games " << s.games << ", draws " << s.draws << ", aborts " << s.aborts << "\n"
            << "manifest " << s.manifest_path.string() << " (" << s.manifest_digest << ")\n";
  return s.aborts > 0 ? kExitRuntime : kExitOk;
}

std::vector<fs::path> log_files(const fs::path& p) {
  if (!fs::is_directory(p)) {
    if (!fs::exists(p)) throw oaq::Error(oaq::Errc::kIo, p.string() + " does not exist");
    return {p};
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(p)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonl" &&
        e.path().filename() != "labels.jsonl") {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw oaq::Error(oaq::Errc::kEmptyInput, "no *.jsonl logs in " + p.string());
  return files;
}

int cmd_replay(const std::string& target, bool verify) {
  int failures = 0;
  for (const auto& file : log_files(target)) {
    oaq::GameLog log;
    try {
      log = oaq::read_game_log(file);
    } catch (const oaq::Error& e) {
      std::cout << file.string() << ": malformed: " << e.what() << "\n";
      ++failures;
      continue;
    }
    if (!verify) {
      oaq::GameState state = oaq::new_game(log.header.rule_config);
      for (const auto& t : log.turns) {
        if (state.finished()) break;
        state = oaq::apply_move(state, t.action).first;
        print_turn(t, state, log.header.seats);
      }
      std::cout << result_line(log) << "\n";
    }
    const auto report = oaq::replay(log);
    if (report.verified()) {
      std::cout << file.string() << ": verified, " << report.turns_checked << " turns\n";
    } else {
      const auto& d = *report.divergence;
      std::cout << file.string() << ": divergence at "
                << (d.turn > 0 ? "turn " + std::to_string(d.turn) : std::string("result"))
                << ", field " << d.field << ": expected " << d.expected << ", found " << d.actual
                << "\n";
      ++failures;
    }
  }
  return failures > 0 ? kExitRuntime : kExitOk;
}

std::string optional_mean(const std::optional<double>& v) { return v ? fixed(*v, 1) : "-"; }

int cmd_analyze(const GlobalFlags& g, const std::string& dir, std::string focal,
                const std::string& format) {
  const auto fmt = oaq::parse_report_format(format);
  const auto logs = oaq::load_logs(dir);
  if (focal.empty() && !g.config.empty()) {
    const auto c = oaq::load_run_config(g.config);
    if (c.focal) focal = *c.focal;
  }
  if (focal.empty()) focal = oaq::default_focal(logs);
  const auto report = oaq::build_report(logs, focal);
  const fs::path out = g.out.empty() ? fs::path(dir) / "analysis" : fs::path(g.out);
  const auto files = oaq::emit_report(report, fmt, out);

  const auto& r = report.rates;
  const auto& p = report.phases;
  std::cout << "matchup: " << report.matchup << "\n"
            << "focal: " << report.focal << " (" << r.games << " games, " << r.aborted
            << " aborted)\n"
            << "win " << fixed(r.win_pct, 1) << "%  draw " << fixed(r.draw_pct, 1) << "%  loss "
            << fixed(r.loss_pct, 1) << "%\n"
            << "points EGE " << optional_mean(p.mean[0]) << "  MGE " << optional_mean(p.mean[1])
            << "  LGE " << optional_mean(p.mean[2]) << "  overall " << fixed(p.overall, 1)
            << "\n";
  for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
  return kExitOk;
}

int cmd_classify(const GlobalFlags& g, const std::string& dir, const std::string& classifier_path,
                 const std::string& focal, bool include_fallback) {
  std::optional<oaq::LlmAgentConfig> classifier;
  std::optional<oaq::RunConfig> run;
  if (!g.config.empty()) run = oaq::load_run_config(g.config);
  if (!classifier_path.empty()) {
    classifier = oaq::load_classifier_config(classifier_path);
  } else if (run && run->classifier) {
    classifier = run->classifier;
  }
  if (!classifier) {
    std::cerr << "error: no classifier configured (use --classifier FILE)\n";
    return kExitUsage;
  }
  oaq::set_global_in_flight_limit(run ? run->llm_max_in_flight : oaq::kDefaultInFlightLimit);
  const auto logs = oaq::load_logs(dir);
  const fs::path out = g.out.empty() ? fs::path(dir) / "classification" : fs::path(g.out);

  oaq::ClassifyOptions options;
  if (!focal.empty()) options.focal = focal;
  options.include_fallback = include_fallback;
  options.workers = g.workers.value_or(run ? run->workers : 1);
  options.cache_path = out / "classify_cache.jsonl";
  const auto transport = oaq::make_http_transport(*classifier);
  const auto report = oaq::classify_reasoning(logs, *classifier, *transport, options);
  const auto files = oaq::emit_reasoning(report, out);

  const auto& d = report.overall;
  std::cout << "turns " << report.turns.size() << ", labeled " << d.labeled << ", errors "
            << d.errors << ", endpoint calls " << report.endpoint_calls << ", cache hits "
            << report.cache_hits << "\n";
  for (std::size_t i = 0; i < oaq::kReasoningLabels.size(); ++i) {
    std::cout << oaq::to_string(oaq::kReasoningLabels[i]) << " " << fixed(d.pct[i], 2) << "%\n";
  }
  for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mandarin Square Capture engine, agents, tournaments and analysis"};
  app.set_version_flag("--version", std::string(OAQ_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--config", g.config, "Run config JSON file");
  app.add_option("--seed", g.seed, "Override match.base_seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--workers", g.workers, "Concurrent games or requests")->check(CLI::PositiveNumber);

  auto* play = app.add_subcommand("play", "Play one game and print the transcript");

  auto* tournament = app.add_subcommand("tournament", "Run every game of the match");
  std::optional<int> games;
  tournament->add_option("--games", games, "Override match.games")->check(CLI::PositiveNumber);

  auto* replay = app.add_subcommand("replay", "Print or verify game logs");
  std::string replay_target;
  bool verify = false;
  replay->add_option("path", replay_target, "Log file or directory")->required();
  replay->add_flag("--verify", verify, "Check every turn against the engine");

  auto* analyze = app.add_subcommand("analyze", "Rates, phase scores and planning depth");
  std::string analyze_dir;
  std::string focal;
  std::string format = "both";
  analyze->add_option("logs", analyze_dir, "Directory of game logs")->required();
  analyze->add_option("--focal", focal, "Agent to report on");
  analyze->add_option("--format", format, "json, csv or both")
      ->check(CLI::IsMember({"json", "csv", "both"}));

  auto* classify = app.add_subcommand("classify", "Label reasoning texts with an LLM");
  std::string classify_dir;
  std::string classifier_path;
  std::string classify_focal;
  bool include_fallback = false;
  classify->add_option("logs", classify_dir, "Directory of game logs")->required();
  classify->add_option("--classifier", classifier_path, "Classifier LLM config JSON");
  classify->add_option("--focal", classify_focal, "Only this agent's turns");
  classify->add_flag("--include-fallback", include_fallback, "Also label fallback turns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*play) return cmd_play(g);
    if (*tournament) return cmd_tournament(g, games);
    if (*replay) return cmd_replay(replay_target, verify);
    if (*analyze) return cmd_analyze(g, analyze_dir, focal, format);
    if (*classify) return cmd_classify(g, classify_dir, classifier_path, classify_focal, include_fallback);
  } catch (const oaq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == oaq::Errc::kInvalidConfig ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
