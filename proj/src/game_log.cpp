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

#include "oaq/game_log.hpp"

#include <fstream>
#include <sstream>

#include "oaq/error.hpp"
#include "oaq/hash.hpp"
#include "oaq/json_io.hpp"

namespace oaq {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::kMalformedLog, what); }

json snapshot_to_json(const BoardSnapshot& s) {
  return {{"peasants", s.peasants}, {"mandarins", s.mandarins}};
}

BoardSnapshot snapshot_from_json(const json& j) {
  BoardSnapshot s;
  const auto& p = j.at("peasants");
  const auto& m = j.at("mandarins");
  if (!p.is_array() || p.size() != kNumPits || !m.is_array() || m.size() != kNumPits) {
    malformed("board snapshot needs 12 peasants and 12 mandarin flags");
  }
  for (std::size_t i = 0; i < kNumPits; ++i) {
    s.peasants[i] = p[i].get<int>();
    s.mandarins[i] = m[i].get<bool>();
  }
  return s;
}

json ledger_to_json(const CaptureLedger& l) {
  return {{"peasants", l.peasants}, {"mandarins", l.mandarins}};
}

CaptureLedger ledger_from_json(const json& j) {
  return {j.at("peasants").get<int>(), j.at("mandarins").get<int>()};
}

Player player_from_json(const json& j) {
  const auto p = parse_player(j.get<std::string>());
  if (!p) malformed("bad player id");
  return *p;
}

json header_to_json(const GameHeader& h) {
  return {{"artifact_version", h.artifact_version},
          {"rule_config", rule_config_to_json(h.rule_config)},
          {"agent_a", agent_spec_to_json(h.agent_a)},
          {"agent_b", agent_spec_to_json(h.agent_b)},
          {"seats", {{"A", h.seats[0]}, {"B", h.seats[1]}}},
          {"base_seed", h.base_seed},
          {"game_index", h.game_index},
          {"seed", h.seed}};
}

GameHeader header_from_json(const json& j) {
  GameHeader h;
  h.artifact_version = j.at("artifact_version").get<std::string>();
  h.rule_config = rule_config_from_json(j.at("rule_config"));
  h.agent_a = agent_spec_from_json(j.at("agent_a"));
  h.agent_b = agent_spec_from_json(j.at("agent_b"));
  h.seats = {j.at("seats").at("A").get<std::string>(), j.at("seats").at("B").get<std::string>()};
  h.base_seed = j.at("base_seed").get<std::uint64_t>();
  h.game_index = j.at("game_index").get<int>();
  h.seed = j.at("seed").get<std::uint64_t>();
  return h;
}

json result_to_json(const GameResult& r) {
  json j = {{"end_reason", r.end_reason}, {"ending_round", r.ending_round}};
  j["points"] = r.points ? json{{"A", (*r.points)[0]}, {"B", (*r.points)[1]}} : json(nullptr);
  if (r.aborted()) {
    j["winner"] = nullptr;
    j["error"] = r.error;
  } else {
    j["winner"] = r.winner ? std::string(to_string(*r.winner)) : std::string("draw");
  }
  return j;
}

GameResult result_from_json(const json& j) {
  GameResult r;
  r.end_reason = j.at("end_reason").get<std::string>();
  r.ending_round = j.at("ending_round").get<int>();
  if (!j.at("points").is_null()) {
    r.points = std::array<int, 2>{j["points"].at("A").get<int>(), j["points"].at("B").get<int>()};
  }
  if (r.aborted()) {
    r.error = j.value("error", "");
  } else {
    const auto w = j.at("winner").get<std::string>();
    if (w != "draw") r.winner = player_from_json(j["winner"]);
  }
  if (!r.aborted() && !parse_end_reason(r.end_reason)) malformed("unknown end_reason");
  return r;
}

}  // namespace

BoardSnapshot BoardSnapshot::of(const BoardState& board) {
  BoardSnapshot s;
  for (int i = 0; i < kNumPits; ++i) {
    s.peasants[static_cast<std::size_t>(i)] = board[i].peasants;
    s.mandarins[static_cast<std::size_t>(i)] = board[i].has_mandarin;
  }
  return s;
}

std::optional<Player> GameLog::seat_of(std::string_view agent_name) const {
  if (header.seats[0] == agent_name) return Player::kA;
  if (header.seats[1] == agent_name) return Player::kB;
  return std::nullopt;
}

std::uint64_t compute_record_digest(const TurnRecord& record) {
  return fnv1a64(dump_compact(turn_record_body_json(record)));
}

json turn_record_to_json(const TurnRecord& r) {
  json j = turn_record_body_json(r);
  j["record_digest"] = hex_digest(fnv1a64(dump_compact(j)));
  return j;
}

json turn_record_body_json(const TurnRecord& r) {
  json j = {{"turn_number", r.turn_number},
            {"round_number", r.round_number},
            {"mover", std::string(to_string(r.mover))},
            {"board_before", snapshot_to_json(r.board_before)},
            {"action", action_to_json(r.action)},
            {"reason", r.reason},
            {"fallback_used", r.fallback_used},
            {"attempts", r.attempts},
            {"step_count", r.step_count},
            {"peasants_captured", r.peasants_captured},
            {"mandarins_captured", r.mandarins_captured},
            {"board_after", snapshot_to_json(r.board_after)},
            {"ledgers_after",
             {{"A", ledger_to_json(r.ledgers_after[0])}, {"B", ledger_to_json(r.ledgers_after[1])}}},
            {"state_hash_after", hex_digest(r.state_hash_after)}};
  if (!r.exchanges.empty()) {
    json ex = json::array();
    for (const auto& e : r.exchanges) ex.push_back({{"request", e.request}, {"response", e.response}});
    j["exchanges"] = std::move(ex);
  }
  return j;
}

TurnRecord turn_record_from_json(const json& j) {
  TurnRecord r;
  r.turn_number = j.at("turn_number").get<int>();
  r.round_number = j.at("round_number").get<int>();
  r.mover = player_from_json(j.at("mover"));
  r.board_before = snapshot_from_json(j.at("board_before"));
  r.action = action_from_json(j.at("action"));
  r.reason = j.at("reason").get<std::string>();
  r.fallback_used = j.at("fallback_used").get<bool>();
  r.attempts = j.at("attempts").get<int>();
  r.step_count = j.at("step_count").get<int>();
  r.peasants_captured = j.at("peasants_captured").get<int>();
  r.mandarins_captured = j.at("mandarins_captured").get<int>();
  r.board_after = snapshot_from_json(j.at("board_after"));
  r.ledgers_after = {ledger_from_json(j.at("ledgers_after").at("A")),
                     ledger_from_json(j.at("ledgers_after").at("B"))};
  r.state_hash_after = parse_hex_digest(j.at("state_hash_after").get<std::string>());
  if (j.contains("exchanges")) {
    for (const auto& e : j["exchanges"]) {
      r.exchanges.push_back({e.at("request").get<std::string>(), e.at("response").get<std::string>()});
    }
  }
  if (j.contains("record_digest")) {
    r.record_digest = parse_hex_digest(j["record_digest"].get<std::string>());
  }
  return r;
}

std::string to_jsonl(const GameLog& log) {
  std::string out = dump_compact(header_to_json(log.header));
  out += '\n';
  for (const auto& t : log.turns) {
    out += dump_compact(turn_record_to_json(t));
    out += '\n';
  }
  out += dump_compact(result_to_json(log.result));
  out += '\n';
  return out;
}

GameLog parse_game_log(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
  }
  if (lines.size() < 2) malformed("log needs a header line and a result line");
  try {
    GameLog log;
    log.header = header_from_json(json::parse(lines.front()));
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
      log.turns.push_back(turn_record_from_json(json::parse(lines[i])));
    }
    log.result = result_from_json(json::parse(lines.back()));
    return log;
  } catch (const Error& e) {
    if (e.code() == Errc::kMalformedLog) throw;
    malformed(e.what());
  } catch (const json::exception& e) {
    malformed(e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GameLog read_game_log(const std::filesystem::path& path) {
  try {
    return parse_game_log(read_file(path));
  } catch (const Error& e) {
    if (e.code() != Errc::kMalformedLog) throw;
    throw Error(Errc::kMalformedLog, path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kIo, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error(Errc::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::kIo, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string log_id(const GameLog& log) { return hex_digest(fnv1a64(to_jsonl(log))); }

}  // namespace oaq
