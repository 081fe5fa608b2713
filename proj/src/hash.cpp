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

#include "oaq/hash.hpp"

#include <charconv>

#include "oaq/error.hpp"

namespace oaq {

std::string hex_digest(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::uint64_t parse_hex_digest(std::string_view text) {
  if (text.starts_with("0x")) text.remove_prefix(2);
  std::uint64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value, 16);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw Error(Errc::kMalformedLog, "bad hex digest '" + std::string(text) + "'");
  }
  return value;
}

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidConfig: return "InvalidConfig";
    case Errc::kEmptySource: return "EmptySource";
    case Errc::kQuanSource: return "QuanSource";
    case Errc::kIllegalAction: return "IllegalAction";
    case Errc::kGameFinished: return "GameFinished";
    case Errc::kGameInProgress: return "GameInProgress";
    case Errc::kStepBudgetExceeded: return "StepBudgetExceeded";
    case Errc::kNoLegalActions: return "NoLegalActions";
    case Errc::kSearchBudgetExceeded: return "SearchBudgetExceeded";
    case Errc::kTransport: return "TransportError";
    case Errc::kMalformedLog: return "MalformedLog";
    case Errc::kIo: return "IoError";
    case Errc::kEmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

}  // namespace oaq
