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

// Metrics over game logs: win/draw rates, phase-grouped scores, per-round
// planning depth and reasoning-type classification.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "oaq/chat_transport.hpp"
#include "oaq/game_log.hpp"
#include "oaq/llm_config.hpp"

namespace oaq {

// Rounds covered by the per-round tables.
inline constexpr int kReportRounds = 25;

// Every *.jsonl file in dir, ordered by file name. Throws Error(kEmptyInput)
// when there are none.
std::vector<GameLog> load_logs(const std::filesystem::path& dir);

// The LLM agent when exactly one side of the first log is an LLM, otherwise
// the agent seated as A in the first log.
std::string default_focal(const std::vector<GameLog>& logs);

// num / den * 100 rounded half-up to `decimals` places, computed exactly.
double percentage(long num, long den, int decimals);

enum class Phase { kEge, kMge, kLge };

std::string_view to_string(Phase p);
// EGE 1-10, MGE 11-20, LGE 21 and later. nullopt for round 0.
std::optional<Phase> phase_of(int ending_round);

struct Rates {
  int games = 0;  // non-aborted games
  int aborted = 0;
  int wins = 0;
  int draws = 0;
  int losses = 0;
  double win_pct = 0;  // 1 decimal, half-up
  double draw_pct = 0;
  double loss_pct = 0;
};

// Throws Error(kEmptyInput) without finished games and Error(kInvalidConfig)
// when a log does not feature the focal agent.
Rates win_draw_rates(const std::vector<GameLog>& logs, std::string_view focal);

struct PhaseScores {
  std::array<std::optional<double>, 3> mean{};  // indexed by Phase
  std::array<int, 3> games{};
  double overall = 0;
  int total_games = 0;
};

PhaseScores phase_scores(const std::vector<GameLog>& logs, std::string_view focal);

struct Distribution {
  int min = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  int max = 0;
  double mean = 0;
};

// Quartiles use linear interpolation between order statistics. nullopt for
// an empty sample.
std::optional<Distribution> describe(std::vector<int> sample);

struct DepthRow {
  int round = 0;
  int count = 0;
  std::optional<Distribution> steps;
  std::optional<Distribution> reasoning_length;
};

// Number of lines in `reason` holding something besides whitespace.
int reasoning_length(std::string_view reason);

// One row per round 1..kReportRounds.
std::vector<DepthRow> planning_depth(const std::vector<GameLog>& logs, std::string_view focal);

enum class ReasoningLabel { kShortTermGain, kLongTermStrategy, kAmbiguous };

inline constexpr std::array<ReasoningLabel, 3> kReasoningLabels = {
    ReasoningLabel::kShortTermGain, ReasoningLabel::kLongTermStrategy,
    ReasoningLabel::kAmbiguous};

std::string_view to_string(ReasoningLabel l);
std::optional<ReasoningLabel> parse_reasoning_label(std::string_view name);

// Earliest label token found anywhere in the classifier's reply.
std::optional<ReasoningLabel> find_label(std::string_view reply);

std::string classification_prompt(std::string_view reasoning);

struct LabeledTurn {
  std::string log_id;
  int game_index = 0;
  int turn = 0;
  int round = 0;
  std::string agent;
  bool fallback_used = false;
  std::optional<ReasoningLabel> label;  // nullopt: classification error
  std::string raw;                      // classifier reply
  bool from_cache = false;
};

struct LabelDistribution {
  int labeled = 0;
  int errors = 0;
  std::array<int, 3> counts{};
  std::array<double, 3> pct{};  // of labeled turns, 2 decimals, half-up
};

struct ReasoningReport {
  std::string model;
  std::vector<LabeledTurn> turns;  // log order, then turn order
  LabelDistribution overall;
  std::vector<LabelDistribution> per_round;  // rounds 1..kReportRounds
  int endpoint_calls = 0;
  int cache_hits = 0;
  int excluded_fallback = 0;
};

struct ClassifyOptions {
  std::optional<std::string> focal;  // all movers when unset
  bool include_fallback = false;
  int workers = 1;
  // JSONL cache keyed by (log id, turn, model); read if present, rewritten
  // after the run.
  std::optional<std::filesystem::path> cache_path;
};

// Sends one request per turn. TransportError propagates after the cache is
// saved; unparseable replies are counted as errors.
ReasoningReport classify_reasoning(const std::vector<GameLog>& logs,
                                   const LlmAgentConfig& classifier, ChatTransport& transport,
                                   const ClassifyOptions& options = {});

LabelDistribution label_distribution(const std::vector<const LabeledTurn*>& turns);

struct MetricsReport {
  std::string matchup;
  std::string focal;
  int logs_loaded = 0;
  Rates rates;
  PhaseScores phases;
  std::vector<DepthRow> depth;
  std::optional<ReasoningReport> reasoning;
};

// Replays every log first; throws Error(kMalformedLog) if one diverges.
MetricsReport build_report(const std::vector<GameLog>& logs, std::string_view focal);

enum class ReportFormat { kJson, kCsv, kBoth };

ReportFormat parse_report_format(std::string_view s);

nlohmann::json report_to_json(const MetricsReport& report);
nlohmann::json reasoning_to_json(const ReasoningReport& reasoning);

// report.json and/or rates.csv, phases.csv, depth.csv, plus
// reasoning_overall.csv and reasoning_rounds.csv when reasoning is present.
// Returns the written paths.
std::vector<std::filesystem::path> emit_report(const MetricsReport& report, ReportFormat format,
                                               const std::filesystem::path& out_dir);

// labels.jsonl, reasoning.json, reasoning_overall.csv, reasoning_rounds.csv.
std::vector<std::filesystem::path> emit_reasoning(const ReasoningReport& reasoning,
                                                  const std::filesystem::path& out_dir);

}  // namespace oaq
