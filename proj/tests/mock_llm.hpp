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

// In-process chat transports for tests.

#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "oaq/chat_transport.hpp"

namespace oaq::testing {

class ScriptedTransport : public ChatTransport {
 public:
  using Script = std::function<std::string(const ChatRequest&, int call)>;

  explicit ScriptedTransport(Script script) : script_(std::move(script)) {}

  // Replies from the list in order, repeating the last one.
  static std::shared_ptr<ScriptedTransport> replies(std::vector<std::string> list) {
    return std::make_shared<ScriptedTransport>([list](const ChatRequest&, int call) {
      return list[std::min<std::size_t>(static_cast<std::size_t>(call), list.size() - 1)];
    });
  }

  std::string complete(const ChatRequest& request) override {
    const int call = calls_++;
    {
      std::lock_guard lock(mu_);
      requests_.push_back(request);
    }
    return script_(request, call);
  }

  int calls() const { return calls_; }
  std::vector<ChatRequest> requests() const {
    std::lock_guard lock(mu_);
    return requests_;
  }

 private:
  Script script_;
  std::atomic<int> calls_{0};
  mutable std::mutex mu_;
  std::vector<ChatRequest> requests_;
};

// Nonempty own positions listed in a decision prompt.
inline std::vector<int> playable_positions(const std::string& prompt) {
  static const std::regex line(R"(peasants (\d+) \| mandarin \w+ \| your position (\d))");
  std::vector<int> out;
  std::istringstream in(prompt);
  std::string l;
  while (std::getline(in, l)) {
    std::smatch m;
    if (std::regex_search(l, m, line) && std::stoi(m[1]) > 0) out.push_back(std::stoi(m[2]));
  }
  return out;
}

// A well-behaved model: thinks aloud, then answers with a legal move.
inline std::string legal_reply(const ChatRequest& request, int call) {
  const auto positions = playable_positions(request.messages.back().content);
  const int pos = positions.empty() ? 1 : positions[static_cast<std::size_t>(call) % positions.size()];
  const char* dir = call % 3 == 0 ? "RTL" : "LTR";
  return "Position " + std::to_string(pos) + " keeps my row spread out.\n"
         "Scattering " + dir + " avoids feeding the opponent.\n"
         "{\"reason\": \"Spread tokens from position " + std::to_string(pos) +
         "\", \"position\": " + std::to_string(pos) + ", \"direction\": \"" + dir + "\"}";
}

}  // namespace oaq::testing
