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

#include "oaq/llm_agent.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "oaq/error.hpp"

namespace oaq {
namespace {

using nlohmann::json;

// Decision-making prompt. Slots are filled in a single pass so text inside a
// slot is never re-expanded.
constexpr std::string_view kDecisionTemplate =
    "You are an intelligent agent playing the traditional Vietnamese game \"\xC3\x94 \xC4\x82n "
    "Quan\".\n"
    "\n"
    "---\n"
    "\n"
    "**Persona**:\n"
    "\n"
    "<persona>\n"
    "\n"
    "---\n"
    "\n"
    "**Game States**\n"
    "After the opponent takes action, here is the current board state:\n"
    "\n"
    "<game_state>\n"
    "\n"
    "---\n"
    "\n"
    "**History**\n"
    "\n"
    "My thoughts on the previous round: <history>\n"
    "\n"
    "---\n"
    "\n"
    "**Game Rules**\n"
    "\n"
    "<rules>\n"
    "\n"
    "---\n"
    "\n"
    "**Task**\n"
    "\n"
    "Based on the above rules and current game state, think about:\n"
    "\n"
    "- Which position should you pick to scatter from?\n"
    "\n"
    "- Which direction to scatter?\n"
    "\n"
    "- Which move fits your strategy?\n";

constexpr std::string_view kOutputFormat =
    "\n"
    "**Output format**\n"
    "\n"
    "Think it through, then finish your answer with exactly one JSON object on its own line, "
    "with these fields:\n"
    "- \"reason\": a short explanation of the move (string)\n"
    "- \"position\": the position on your own row to scatter from, 1 to 5 (integer)\n"
    "- \"direction\": \"LTR\" (towards higher pit numbers) or \"RTL\" (towards lower pit "
    "numbers)\n"
    "\n"
    "Example: {\"reason\": \"Scatter from position 2 to set up a capture\", \"position\": 2, "
    "\"direction\": \"LTR\"}\n";

std::string fill_template(std::string_view tmpl, const PromptBundle& b) {
  const std::pair<std::string_view, const std::string*> slots[] = {
      {"<persona>", &b.persona_text},
      {"<game_state>", &b.game_state_text},
      {"<history>", &b.history_text},
      {"<rules>", &b.rules_text},
  };
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    bool replaced = false;
    if (tmpl[pos] == '<') {
      for (const auto& [name, value] : slots) {
        if (tmpl.substr(pos, name.size()) == name) {
          out += *value;
          pos += name.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out += tmpl[pos++];
  }
  return out;
}

// Offset one past the brace closing the object opened at `open`, or npos.
std::size_t match_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

bool has_block_shape(const json& obj) {
  return obj.contains("reason") && obj["reason"].is_string() && obj.contains("position") &&
         obj["position"].is_number_integer() && obj.contains("direction") &&
         obj["direction"].is_string();
}

bool mentions_block_field(const json& obj) {
  return obj.contains("reason") || obj.contains("position") || obj.contains("direction");
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string correction_for(const ParseFailure& f) {
  switch (f.kind) {
    case ParseFailureKind::kMissingBlock:
      return "no JSON action block was found; end with {\"reason\": ..., \"position\": ..., "
             "\"direction\": ...}.";
    case ParseFailureKind::kMalformed:
      return "the JSON action block was malformed (" + f.detail + ").";
    case ParseFailureKind::kOutOfRange:
      return "position must be an integer from 1 to 5 (" + f.detail + ").";
    case ParseFailureKind::kIllegalAction:
      return "that move is not legal (" + f.detail + "); choose a nonempty position on your row.";
  }
  return f.detail;
}

}  // namespace

const std::vector<Persona>& builtin_personas() {
  static const std::vector<Persona> personas = {
      {"Balanced",
       "You weigh immediate captures against the position they leave behind. Take clear gains, "
       "but avoid moves that hand the opponent an easy capture or empty your own row."},
      {"Defensive",
       "You protect your own row and your Mandarin first. Prefer moves that keep tokens spread "
       "across your positions and leave no empty-then-full pattern for the opponent to exploit."},
      {"QuickPlay",
       "You play fast and simple. Pick the move that captures the most right now; when nothing "
       "captures, pick the shortest, least risky scatter."},
      {"RiskTaker",
       "You chase big swings. Go for long relays and Mandarin captures even when a miss could "
       "leave your row exposed."},
      {"StrategicControl",
       "You aim to control the board early. Build up heavy positions, starve the opponent's row, "
       "and time your captures so the Mandarins fall to you once they are mature."},
  };
  return personas;
}

std::optional<Persona> find_builtin_persona(std::string_view name) {
  for (const auto& p : builtin_personas()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

void LlmAgentConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(Errc::kInvalidConfig, why); };
  if (endpoint_url.empty()) fail("llm endpoint_url is required");
  parse_endpoint(endpoint_url);
  if (model_name.empty()) fail("llm model_name is required");
  if (temperature && *temperature < 0) fail("llm temperature must be >= 0");
  if (max_retries < 0) fail("llm max_retries must be >= 0");
  if (request_timeout.count() <= 0) fail("llm request_timeout must be positive");
  if (persona.instruction.empty()) fail("llm persona instruction must be nonempty");
}

std::string render_state(const GameState& state) {
  std::ostringstream out;
  const Player me = state.current_player;
  out << "Pits (index | side | kind | peasants | mandarin):\n";
  for (int pit = 0; pit < kNumPits; ++pit) {
    const Pit& p = state.board[pit];
    out << "pit " << pit << " | side " << to_string(side_of(pit)) << " | "
        << (is_quan(pit) ? "Quan" : "Regular") << " | peasants " << p.peasants << " | mandarin "
        << (p.has_mandarin ? "yes" : "no");
    if (is_own_regular(me, pit)) out << " | your position " << relative_position(me, pit);
    out << "\n";
  }
  for (Player p : {Player::kA, Player::kB}) {
    const auto& l = state.ledger(p);
    out << "Captured by " << to_string(p) << ": " << l.peasants << " peasants, " << l.mandarins
        << " mandarins\n";
  }
  out << "Current player: " << to_string(me) << " (you)\n";
  out << "Turn " << state.turn_number << ", round " << state.round_number() << " of "
      << state.config.max_rounds << "\n";
  return out.str();
}

std::string render_history(const std::optional<TurnSummary>& history) {
  if (!history) return std::string(kFirstMoveHistory);
  const TurnSummary& h = *history;
  std::ostringstream out;
  out << "Player " << to_string(h.mover) << " scattered from position "
      << relative_position(h.mover, h.action.pit) << " (pit " << h.action.pit << ") "
      << to_string(h.action.direction) << " and gained " << h.points_delta
      << " points. Their reasoning: " << h.reason;
  return out.str();
}

std::string rules_text(const RuleConfig& config) {
  std::ostringstream out;
  out << "The board is a ring of 12 pits numbered 0 to 11. Pits 0 and 6 are Quan pits, each "
         "starting with one Mandarin. Player A owns pits 1-5 (positions 1-5), player B owns "
         "pits 7-11 (positions 1-5). Each regular pit starts with 5 peasants.\n"
      << "Scattering: pick one of your nonempty positions and a direction. LTR moves towards "
         "higher pit numbers (11 wraps to 0), RTL towards lower ones (0 wraps to 11). Take all "
         "peasants from the pit and drop one into each following pit, Quan pits included.\n";
  if (config.relay_enabled) {
    out << "Relay: if the pit after your last drop is a nonempty regular pit, pick it up and "
           "keep scattering in the same direction. If it is a Quan pit, your turn ends.\n";
  } else {
    out << "If the pit after your last drop is a Quan pit or holds peasants, your turn ends.\n";
  }
  out << "Capturing: if the pit after your last drop is empty and the one after it is not, you "
         "capture everything in that second pit, then check the next two pits the same way.\n"
      << "E1 Immature Mandarin: a Quan pit holding its Mandarin and fewer than 5 peasants cannot "
         "be captured.\n"
      << "E2 Forced Redistribution: if all your positions are empty at the start of your turn, "
         "you return 5 captured peasants, one to each position. If you cannot, the game ends.\n"
      << "E3 Early Game Restriction: no Mandarin can be captured during the first two rounds.\n"
      << "E4 Two-Empty Rule: if the two pits after your last drop are both empty, your turn ends "
         "immediately.\n"
      << "E5 Forced Capture Chain: every available capture must be taken, and you keep capturing "
         "as long as the pattern continues.\n"
      << "Scoring: a peasant is worth 1 point and a Mandarin " << config.mandarin_point_value
      << " points. The game ends when both Mandarins are captured, when a player cannot move, or "
         "after round "
      << config.max_rounds << ".";
  if (config.sweep_at_end) {
    out << " At the end each player also collects the peasants left on their own row";
    if (config.quan_leftover_to_side_owner) out << " and in the Quan pit on their side";
    out << ".";
  }
  out << "\n";
  return out.str();
}

PromptBundle make_prompt_bundle(const GameState& state, const std::optional<TurnSummary>& history,
                                const Persona& persona) {
  return PromptBundle{render_state(state), render_history(history), rules_text(state.config),
                      persona.name + ": " + persona.instruction};
}

std::string build_prompt(const PromptBundle& bundle) {
  PromptBundle b = bundle;
  if (b.history_text.empty()) b.history_text = std::string(kFirstMoveHistory);
  return fill_template(kDecisionTemplate, b) + std::string(kOutputFormat);
}

std::string_view to_string(ParseFailureKind kind) {
  switch (kind) {
    case ParseFailureKind::kMissingBlock: return "MissingBlock";
    case ParseFailureKind::kMalformed: return "Malformed";
    case ParseFailureKind::kOutOfRange: return "OutOfRange";
    case ParseFailureKind::kIllegalAction: return "IllegalAction";
  }
  return "?";
}

ParseResult parse_decision(std::string_view raw, const GameState& state) {
  std::optional<json> block;
  bool saw_partial = false;
  std::size_t search_end = raw.size();
  while (search_end > 0) {
    const std::size_t open = raw.rfind('{', search_end - 1);
    if (open == std::string_view::npos) break;
    search_end = open;
    const std::size_t close = match_brace(raw, open);
    if (close == std::string_view::npos) {
      if (raw.substr(open).find("\"position\"") != std::string_view::npos) saw_partial = true;
      continue;
    }
    json obj = json::parse(raw.substr(open, close - open), nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      if (raw.substr(open, close - open).find("\"position\"") != std::string_view::npos) {
        saw_partial = true;
      }
      continue;
    }
    if (has_block_shape(obj)) {
      block = std::move(obj);
      break;
    }
    if (mentions_block_field(obj)) saw_partial = true;
  }

  if (!block) {
    if (saw_partial) {
      return ParseFailure{ParseFailureKind::kMalformed,
                          "block needs string reason, integer position, string direction"};
    }
    return ParseFailure{ParseFailureKind::kMissingBlock, "no JSON action block"};
  }

  const std::string reason = trim((*block)["reason"].get<std::string>());
  const std::string dir_text = upper(trim((*block)["direction"].get<std::string>()));
  const auto direction = parse_direction(dir_text);
  if (!direction) {
    return ParseFailure{ParseFailureKind::kMalformed,
                        "direction '" + (*block)["direction"].get<std::string>() +
                            "' is not LTR or RTL"};
  }
  if (reason.empty()) return ParseFailure{ParseFailureKind::kMalformed, "reason is empty"};
  const auto position = (*block)["position"].get<long long>();
  if (position < 1 || position > kPitsPerSide) {
    return ParseFailure{ParseFailureKind::kOutOfRange,
                        "position " + std::to_string(position) + " is outside 1-5"};
  }
  if (state.finished()) {
    return ParseFailure{ParseFailureKind::kIllegalAction, "the game is over"};
  }
  const Action action{absolute_pit(state.current_player, static_cast<int>(position)), *direction};
  const auto legal = legal_actions(state);
  if (std::find(legal.begin(), legal.end(), action) == legal.end()) {
    return ParseFailure{ParseFailureKind::kIllegalAction,
                        "position " + std::to_string(position) + " is empty"};
  }
  AgentDecision decision;
  decision.reason = reason;
  decision.action = action;
  return decision;
}

AgentDecision llm_decide(const LlmAgentConfig& config, ChatTransport& transport,
                         const GameState& state, const std::optional<TurnSummary>& history,
                         std::uint64_t fallback_seed) {
  if (state.finished()) throw Error(Errc::kGameFinished, "llm_decide on finished game");
  const std::string prompt = build_prompt(make_prompt_bundle(state, history, config.persona));
  std::vector<LlmExchange> exchanges;
  std::string correction;
  const int max_calls = 1 + config.max_retries;
  for (int attempt = 1; attempt <= max_calls; ++attempt) {
    ChatRequest request;
    request.model = config.model_name;
    request.temperature = config.temperature;
    std::string content = prompt;
    if (!correction.empty()) {
      content += "\nYour previous reply could not be used: " + correction + "\n";
    }
    request.messages.push_back({"user", content});
    std::string raw = transport.complete(request);
    exchanges.push_back({content, raw});

    auto parsed = parse_decision(raw, state);
    if (auto* decision = std::get_if<AgentDecision>(&parsed)) {
      decision->attempts = attempt;
      decision->fallback_used = false;
      decision->exchanges = std::move(exchanges);
      return std::move(*decision);
    }
    correction = correction_for(std::get<ParseFailure>(parsed));
  }

  AgentDecision fallback = random_decision(fallback_seed, state);
  fallback.fallback_used = true;
  fallback.attempts = max_calls;
  const std::string& last = exchanges.back().response;
  fallback.reason = trim(last).empty() ? std::string("(empty response)")
                                       : last.substr(0, kFallbackReasonLimit);
  fallback.exchanges = std::move(exchanges);
  return fallback;
}

std::shared_ptr<ChatTransport> make_http_transport(const LlmAgentConfig& config) {
  return std::make_shared<HttpChatTransport>(config.endpoint_url, config.api_key_env_var,
                                             config.request_timeout);
}

}  // namespace oaq
