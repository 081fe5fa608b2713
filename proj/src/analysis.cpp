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

#include "oaq/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "oaq/arena.hpp"
#include "oaq/error.hpp"
#include "oaq/json_io.hpp"

namespace oaq {

using nlohmann::json;

namespace {

constexpr std::string_view kClassificationTemplate =
    "You are analyzing the reasoning behind a move in the traditional Vietnamese board game "
    "\xC3\x94 \xC4\x82n Quan.\n"
    "In this game, players distribute peasant tokens across positions and try to capture their "
    "opponent's tokens, following complex rules including protection of Mandarin positions "
    "(Quan), avoiding Immature Mandarins, and maximizing long-term advantage.\n"
    "Given the player's reasoning below, classify it into one of the following reason type.\n"
    "In addition to predicting the label, please transcribe the reasoning and highlight the "
    "parts that led to the model's labeling decision using **bold text**.\n"
    "\n"
    "Reason types:\n"
    "- SHORT_TERM_GAIN: the move is chosen for its immediate capture or points.\n"
    "- LONG_TERM_STRATEGY: the move is chosen to set up later turns, protect pits or limit "
    "the opponent.\n"
    "- AMBIGUOUS: the reasoning supports neither reading clearly.\n"
    "\n"
    "Start your answer with the label on its own line.\n"
    "\n"
    "Reasoning: ";

long pow10(int d) {
  long p = 1;
  while (d-- > 0) p *= 10;
  return p;
}

void require_nonempty(const std::vector<GameLog>& logs) {
  if (logs.empty()) throw Error(Errc::kEmptyInput, "no game logs to analyze");
}

Player focal_seat(const GameLog& log, std::string_view focal) {
  const auto seat = log.seat_of(focal);
  if (!seat) {
    throw Error(Errc::kInvalidConfig, "agent '" + std::string(focal) + "' does not play in game " +
                                          std::to_string(log.header.game_index));
  }
  return *seat;
}

double quantile(const std::vector<int>& sorted, double p) {
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json distribution_json(const std::optional<Distribution>& d) {
  if (!d) return nullptr;
  return {{"min", d->min}, {"q1", d->q1},   {"median", d->median},
          {"q3", d->q3},   {"max", d->max}, {"mean", d->mean}};
}

json label_distribution_json(const LabelDistribution& d) {
  json counts = json::object();
  json pct = json::object();
  for (std::size_t i = 0; i < kReasoningLabels.size(); ++i) {
    const std::string name(to_string(kReasoningLabels[i]));
    counts[name] = d.counts[i];
    pct[name] = d.pct[i];
  }
  return {{"labeled", d.labeled}, {"errors", d.errors}, {"counts", counts}, {"percent", pct}};
}

// CSV cells reuse the JSON number rendering so both formats agree.
std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }
  return v.dump();
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<json>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell(row[i]);
    out += "\n";
  }
  return out;
}

std::vector<json> distribution_cells(const std::optional<Distribution>& d) {
  if (!d) return std::vector<json>(6, nullptr);
  return {d->min, d->q1, d->median, d->q3, d->max, d->mean};
}

std::string reasoning_overall_csv(const ReasoningReport& r) {
  std::vector<std::vector<json>> rows;
  for (std::size_t i = 0; i < kReasoningLabels.size(); ++i) {
    rows.push_back({std::string(to_string(kReasoningLabels[i])), r.overall.counts[i],
                    r.overall.pct[i]});
  }
  return csv({"label", "count", "percent"}, rows);
}

std::string reasoning_rounds_csv(const ReasoningReport& r) {
  std::vector<std::vector<json>> rows;
  for (std::size_t k = 0; k < r.per_round.size(); ++k) {
    const auto& d = r.per_round[k];
    std::vector<json> row = {static_cast<int>(k) + 1, d.labeled, d.errors};
    for (std::size_t i = 0; i < 3; ++i) row.push_back(d.counts[i]);
    for (std::size_t i = 0; i < 3; ++i) row.push_back(d.labeled ? json(d.pct[i]) : json(nullptr));
    rows.push_back(std::move(row));
  }
  return csv({"round", "labeled", "errors", "short_term_gain_count", "long_term_strategy_count",
              "ambiguous_count", "short_term_gain_pct", "long_term_strategy_pct",
              "ambiguous_pct"},
             rows);
}

using CacheKey = std::tuple<std::string, int, std::string>;

struct CacheEntry {
  ReasoningLabel label;
  std::string raw;
};

std::map<CacheKey, CacheEntry> read_cache(const std::filesystem::path& path) {
  std::map<CacheKey, CacheEntry> cache;
  if (!std::filesystem::exists(path)) return cache;
  std::istringstream in(read_file(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const auto label = parse_reasoning_label(j.at("label").get<std::string>());
      if (!label) throw std::runtime_error("unknown label");
      cache[{j.at("log_id").get<std::string>(), j.at("turn").get<int>(),
             j.at("model").get<std::string>()}] = {*label, j.at("raw").get<std::string>()};
    } catch (const std::exception& e) {
      throw Error(Errc::kMalformedLog, path.string() + ":" + std::to_string(line_no) + ": " +
                                           e.what());
    }
  }
  return cache;
}

void write_cache(const std::filesystem::path& path, const std::map<CacheKey, CacheEntry>& cache) {
  std::string out;
  for (const auto& [key, entry] : cache) {
    const json j = {{"log_id", std::get<0>(key)},
                    {"turn", std::get<1>(key)},
                    {"model", std::get<2>(key)},
                    {"label", to_string(entry.label)},
                    {"raw", entry.raw}};
    out += dump_compact(j) + "\n";
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_file_atomic(path, out);
}

}  // namespace

std::vector<GameLog> load_logs(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(Errc::kIo, dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl" &&
        entry.path().filename() != "labels.jsonl" &&
        entry.path().filename().string().rfind(".", 0) != 0) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<GameLog> logs;
  for (const auto& f : files) logs.push_back(read_game_log(f));
  if (logs.empty()) throw Error(Errc::kEmptyInput, "no *.jsonl game logs in " + dir.string());
  return logs;
}

std::string default_focal(const std::vector<GameLog>& logs) {
  require_nonempty(logs);
  const auto& h = logs.front().header;
  const bool a_llm = h.agent_a.kind == AgentKind::kLlm;
  const bool b_llm = h.agent_b.kind == AgentKind::kLlm;
  if (a_llm != b_llm) return a_llm ? h.agent_a.name : h.agent_b.name;
  return h.seats[0];
}

double percentage(long num, long den, int decimals) {
  if (den <= 0) throw Error(Errc::kEmptyInput, "percentage of an empty set");
  const long scale = pow10(decimals);
  const long scaled = (2 * num * 100 * scale + den) / (2 * den);
  return static_cast<double>(scaled) / static_cast<double>(scale);
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kEge: return "EGE";
    case Phase::kMge: return "MGE";
    case Phase::kLge: return "LGE";
  }
  return "?";
}

std::optional<Phase> phase_of(int ending_round) {
  if (ending_round < 1) return std::nullopt;
  if (ending_round <= 10) return Phase::kEge;
  if (ending_round <= 20) return Phase::kMge;
  return Phase::kLge;
}

Rates win_draw_rates(const std::vector<GameLog>& logs, std::string_view focal) {
  require_nonempty(logs);
  Rates r;
  for (const auto& log : logs) {
    const Player seat = focal_seat(log, focal);
    if (log.result.aborted()) {
      ++r.aborted;
      continue;
    }
    ++r.games;
    if (!log.result.winner) {
      ++r.draws;
    } else if (*log.result.winner == seat) {
      ++r.wins;
    } else {
      ++r.losses;
    }
  }
  if (r.games == 0) throw Error(Errc::kEmptyInput, "every game was aborted");
  r.win_pct = percentage(r.wins, r.games, 1);
  r.draw_pct = percentage(r.draws, r.games, 1);
  r.loss_pct = percentage(r.losses, r.games, 1);
  return r;
}

PhaseScores phase_scores(const std::vector<GameLog>& logs, std::string_view focal) {
  require_nonempty(logs);
  PhaseScores s;
  std::array<long, 3> sums{};
  long total = 0;
  for (const auto& log : logs) {
    const Player seat = focal_seat(log, focal);
    if (log.result.aborted() || !log.result.points) continue;
    const auto phase = phase_of(log.result.ending_round);
    if (!phase) continue;
    const int points = (*log.result.points)[static_cast<std::size_t>(index_of(seat))];
    const auto k = static_cast<std::size_t>(*phase);
    sums[k] += points;
    ++s.games[k];
    total += points;
    ++s.total_games;
  }
  if (s.total_games == 0) throw Error(Errc::kEmptyInput, "no finished games");
  for (std::size_t k = 0; k < 3; ++k) {
    if (s.games[k] > 0) s.mean[k] = static_cast<double>(sums[k]) / s.games[k];
  }
  s.overall = static_cast<double>(total) / s.total_games;
  return s;
}

std::optional<Distribution> describe(std::vector<int> sample) {
  if (sample.empty()) return std::nullopt;
  std::sort(sample.begin(), sample.end());
  Distribution d;
  d.min = sample.front();
  d.max = sample.back();
  d.q1 = quantile(sample, 0.25);
  d.median = quantile(sample, 0.5);
  d.q3 = quantile(sample, 0.75);
  long sum = 0;
  for (int v : sample) sum += v;
  d.mean = static_cast<double>(sum) / static_cast<double>(sample.size());
  return d;
}

int reasoning_length(std::string_view reason) {
  int lines = 0;
  bool content = false;
  for (char c : reason) {
    if (c == '\n') {
      lines += content;
      content = false;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      content = true;
    }
  }
  return lines + content;
}

std::vector<DepthRow> planning_depth(const std::vector<GameLog>& logs, std::string_view focal) {
  require_nonempty(logs);
  std::vector<std::vector<int>> steps(kReportRounds);
  std::vector<std::vector<int>> lengths(kReportRounds);
  for (const auto& log : logs) {
    const Player seat = focal_seat(log, focal);
    for (const auto& t : log.turns) {
      if (t.mover != seat || t.round_number < 1 || t.round_number > kReportRounds) continue;
      steps[static_cast<std::size_t>(t.round_number - 1)].push_back(t.step_count);
      lengths[static_cast<std::size_t>(t.round_number - 1)].push_back(reasoning_length(t.reason));
    }
  }
  std::vector<DepthRow> rows;
  for (int r = 1; r <= kReportRounds; ++r) {
    const auto k = static_cast<std::size_t>(r - 1);
    rows.push_back({r, static_cast<int>(steps[k].size()), describe(steps[k]),
                    describe(lengths[k])});
  }
  return rows;
}

std::string_view to_string(ReasoningLabel l) {
  switch (l) {
    case ReasoningLabel::kShortTermGain: return "SHORT_TERM_GAIN";
    case ReasoningLabel::kLongTermStrategy: return "LONG_TERM_STRATEGY";
    case ReasoningLabel::kAmbiguous: return "AMBIGUOUS";
  }
  return "?";
}

std::optional<ReasoningLabel> parse_reasoning_label(std::string_view name) {
  for (auto l : kReasoningLabels) {
    if (to_string(l) == name) return l;
  }
  return std::nullopt;
}

std::optional<ReasoningLabel> find_label(std::string_view reply) {
  std::optional<ReasoningLabel> best;
  std::size_t best_pos = std::string_view::npos;
  for (auto l : kReasoningLabels) {
    const auto pos = reply.find(to_string(l));
    if (pos < best_pos) {
      best_pos = pos;
      best = l;
    }
  }
  return best;
}

std::string classification_prompt(std::string_view reasoning) {
  std::string out(kClassificationTemplate);
  out += reasoning;
  out += "\n";
  return out;
}

LabelDistribution label_distribution(const std::vector<const LabeledTurn*>& turns) {
  LabelDistribution d;
  for (const auto* t : turns) {
    if (!t->label) {
      ++d.errors;
      continue;
    }
    ++d.labeled;
    ++d.counts[static_cast<std::size_t>(*t->label)];
  }
  if (d.labeled > 0) {
    for (std::size_t i = 0; i < 3; ++i) d.pct[i] = percentage(d.counts[i], d.labeled, 2);
  }
  return d;
}

ReasoningReport classify_reasoning(const std::vector<GameLog>& logs,
                                   const LlmAgentConfig& classifier, ChatTransport& transport,
                                   const ClassifyOptions& options) {
  require_nonempty(logs);
  classifier.validate();
  ReasoningReport report;
  report.model = classifier.model_name;

  std::vector<const std::string*> reasons;  // parallel to report.turns
  for (const auto& log : logs) {
    std::optional<Player> seat;
    if (options.focal) seat = focal_seat(log, *options.focal);
    const std::string id = log_id(log);
    for (const auto& t : log.turns) {
      if (seat && t.mover != *seat) continue;
      if (t.fallback_used && !options.include_fallback) {
        ++report.excluded_fallback;
        continue;
      }
      LabeledTurn lt;
      lt.log_id = id;
      lt.game_index = log.header.game_index;
      lt.turn = t.turn_number;
      lt.round = t.round_number;
      lt.agent = log.header.seats[static_cast<std::size_t>(index_of(t.mover))];
      lt.fallback_used = t.fallback_used;
      report.turns.push_back(std::move(lt));
      reasons.push_back(&t.reason);
    }
  }

  std::map<CacheKey, CacheEntry> cache;
  if (options.cache_path) cache = read_cache(*options.cache_path);

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < report.turns.size(); ++i) {
    auto& lt = report.turns[i];
    const auto it = cache.find({lt.log_id, lt.turn, report.model});
    if (it != cache.end()) {
      lt.label = it->second.label;
      lt.raw = it->second.raw;
      lt.from_cache = true;
      ++report.cache_hits;
    } else {
      pending.push_back(i);
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<int> calls{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    while (!stop) {
      const std::size_t k = next.fetch_add(1);
      if (k >= pending.size()) return;
      LabeledTurn& lt = report.turns[pending[k]];
      ChatRequest request;
      request.model = classifier.model_name;
      request.temperature = classifier.temperature;
      request.messages.push_back({"user", classification_prompt(*reasons[pending[k]])});
      try {
        ++calls;
        lt.raw = transport.complete(request);
        lt.label = find_label(lt.raw);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    }
  };
  const int workers =
      std::max(1, std::min<int>(options.workers, static_cast<int>(pending.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  report.endpoint_calls = calls;

  if (options.cache_path) {
    for (const auto& lt : report.turns) {
      if (lt.label && !lt.from_cache) cache[{lt.log_id, lt.turn, report.model}] = {*lt.label, lt.raw};
    }
    write_cache(*options.cache_path, cache);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<const LabeledTurn*> all;
  std::vector<std::vector<const LabeledTurn*>> by_round(kReportRounds);
  for (const auto& lt : report.turns) {
    all.push_back(&lt);
    if (lt.round >= 1 && lt.round <= kReportRounds) {
      by_round[static_cast<std::size_t>(lt.round - 1)].push_back(&lt);
    }
  }
  report.overall = label_distribution(all);
  for (const auto& r : by_round) report.per_round.push_back(label_distribution(r));
  return report;
}

MetricsReport build_report(const std::vector<GameLog>& logs, std::string_view focal) {
  require_nonempty(logs);
  for (const auto& log : logs) {
    const auto check = replay(log);
    if (!check.verified()) {
      throw Error(Errc::kMalformedLog,
                  "game " + std::to_string(log.header.game_index) + " diverges at turn " +
                      std::to_string(check.divergence->turn) + " (" + check.divergence->field +
                      ")");
    }
  }
  MetricsReport report;
  std::set<std::string> matchups;
  for (const auto& log : logs) {
    matchups.insert(log.header.agent_a.name + " vs " + log.header.agent_b.name);
  }
  for (const auto& m : matchups) report.matchup += (report.matchup.empty() ? "" : "; ") + m;
  report.focal = std::string(focal);
  report.logs_loaded = static_cast<int>(logs.size());
  report.rates = win_draw_rates(logs, focal);
  report.phases = phase_scores(logs, focal);
  report.depth = planning_depth(logs, focal);
  return report;
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "json") return ReportFormat::kJson;
  if (s == "csv") return ReportFormat::kCsv;
  if (s == "both") return ReportFormat::kBoth;
  throw Error(Errc::kInvalidConfig, "unknown report format '" + std::string(s) + "'");
}

nlohmann::json reasoning_to_json(const ReasoningReport& r) {
  json rounds = json::array();
  for (std::size_t k = 0; k < r.per_round.size(); ++k) {
    json row = label_distribution_json(r.per_round[k]);
    row["round"] = static_cast<int>(k) + 1;
    rounds.push_back(std::move(row));
  }
  return {{"model", r.model},
          {"turns", r.turns.size()},
          {"endpoint_calls", r.endpoint_calls},
          {"cache_hits", r.cache_hits},
          {"excluded_fallback", r.excluded_fallback},
          {"overall", label_distribution_json(r.overall)},
          {"per_round", std::move(rounds)}};
}

nlohmann::json report_to_json(const MetricsReport& report) {
  const Rates& r = report.rates;
  json phases = json::object();
  for (auto p : {Phase::kEge, Phase::kMge, Phase::kLge}) {
    const auto k = static_cast<std::size_t>(p);
    phases[std::string(to_string(p))] = {{"games", report.phases.games[k]},
                                         {"mean_points", optional_number(report.phases.mean[k])}};
  }
  json depth = json::array();
  for (const auto& row : report.depth) {
    depth.push_back({{"round", row.round},
                     {"count", row.count},
                     {"steps", distribution_json(row.steps)},
                     {"reasoning_length", distribution_json(row.reasoning_length)}});
  }
  json j = {
      {"matchup", report.matchup},
      {"focal", report.focal},
      {"logs_loaded", report.logs_loaded},
      {"rates",
       {{"games", r.games},
        {"aborted", r.aborted},
        {"wins", r.wins},
        {"draws", r.draws},
        {"losses", r.losses},
        {"win_pct", r.win_pct},
        {"draw_pct", r.draw_pct},
        {"loss_pct", r.loss_pct}}},
      {"phases",
       {{"by_ending_phase", phases},
        {"overall_mean_points", report.phases.overall},
        {"games", report.phases.total_games}}},
      {"planning_depth", depth},
      {"metadata",
       {{"phase_grouping", "ending_round: EGE 1-10, MGE 11-20, LGE 21+"},
        {"depth_metric", "step_count: drops + relay pickups + captures per move"},
        {"alternate_depth_metric", "reasoning_length: nonempty lines of the reason text"},
        {"quantiles", "linear interpolation between order statistics"},
        {"rate_rounding", "half-up, 1 decimal"},
        {"label_rounding", "half-up, 2 decimals"},
        {"replay_verified", true},
        {"artifact_version", OAQ_VERSION}}}};
  if (report.reasoning) j["reasoning"] = reasoning_to_json(*report.reasoning);
  return j;
}

std::vector<std::filesystem::path> emit_report(const MetricsReport& report, ReportFormat format,
                                               const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw Error(Errc::kIo, "cannot create " + out_dir.string());
  }
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& text) {
    const auto path = out_dir / name;
    write_file_atomic(path, text);
    written.push_back(path);
  };

  if (format != ReportFormat::kCsv) {
    put("report.json",
        report_to_json(report).dump(2, ' ', false, json::error_handler_t::replace) + "\n");
  }
  if (format == ReportFormat::kJson) return written;

  const Rates& r = report.rates;
  put("rates.csv", csv({"focal", "games", "aborted", "wins", "draws", "losses", "win_pct",
                        "draw_pct", "loss_pct"},
                       {{report.focal, r.games, r.aborted, r.wins, r.draws, r.losses, r.win_pct,
                         r.draw_pct, r.loss_pct}}));

  std::vector<std::vector<json>> phase_rows;
  for (auto p : {Phase::kEge, Phase::kMge, Phase::kLge}) {
    const auto k = static_cast<std::size_t>(p);
    phase_rows.push_back({std::string(to_string(p)), report.phases.games[k],
                          optional_number(report.phases.mean[k])});
  }
  phase_rows.push_back({"overall", report.phases.total_games, report.phases.overall});
  put("phases.csv", csv({"phase", "games", "mean_points"}, phase_rows));

  std::vector<std::vector<json>> depth_rows;
  for (const auto& row : report.depth) {
    std::vector<json> cells = {row.round, row.count};
    for (auto& c : distribution_cells(row.steps)) cells.push_back(std::move(c));
    for (auto& c : distribution_cells(row.reasoning_length)) cells.push_back(std::move(c));
    depth_rows.push_back(std::move(cells));
  }
  put("depth.csv", csv({"round", "count", "steps_min", "steps_q1", "steps_median", "steps_q3",
                        "steps_max", "steps_mean", "reasoning_length_min", "reasoning_length_q1",
                        "reasoning_length_median", "reasoning_length_q3",
                        "reasoning_length_max", "reasoning_length_mean"},
                       depth_rows));

  if (report.reasoning) {
    put("reasoning_overall.csv", reasoning_overall_csv(*report.reasoning));
    put("reasoning_rounds.csv", reasoning_rounds_csv(*report.reasoning));
  }
  return written;
}

std::vector<std::filesystem::path> emit_reasoning(const ReasoningReport& reasoning,
                                                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw Error(Errc::kIo, "cannot create " + out_dir.string());
  }
  std::string labels;
  for (const auto& t : reasoning.turns) {
    const json j = {{"log_id", t.log_id},
                    {"game_index", t.game_index},
                    {"turn", t.turn},
                    {"round", t.round},
                    {"agent", t.agent},
                    {"fallback_used", t.fallback_used},
                    {"label", t.label ? json(std::string(to_string(*t.label))) : json(nullptr)},
                    {"raw", t.raw}};
    labels += dump_compact(j) + "\n";
  }
  const std::vector<std::pair<std::string, std::string>> files = {
      {"labels.jsonl", labels},
      {"reasoning.json",
       reasoning_to_json(reasoning).dump(2, ' ', false, json::error_handler_t::replace) + "\n"},
      {"reasoning_overall.csv", reasoning_overall_csv(reasoning)},
      {"reasoning_rounds.csv", reasoning_rounds_csv(reasoning)}};
  std::vector<std::filesystem::path> written;
  for (const auto& [name, text] : files) {
    write_file_atomic(out_dir / name, text);
    written.push_back(out_dir / name);
  }
  return written;
}

}  // namespace oaq
