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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace oaq {

// FNV-1a, 64-bit. Used for state digests, seed mixing and file digests, so
// the constants and the little-endian integer encoding below are part of the
// log format.
class Fnv1a64 {
 public:
  static constexpr std::uint64_t kOffsetBasis = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;

  void update_byte(std::uint8_t byte) {
    state_ ^= byte;
    state_ *= kPrime;
  }

  void update(std::string_view bytes) {
    for (unsigned char c : bytes) update_byte(c);
  }

  void update_u32(std::uint32_t value) {
    for (int i = 0; i < 4; ++i) update_byte(static_cast<std::uint8_t>(value >> (8 * i)));
  }

  void update_u64(std::uint64_t value) {
    for (int i = 0; i < 8; ++i) update_byte(static_cast<std::uint8_t>(value >> (8 * i)));
  }

  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = kOffsetBasis;
};

inline std::uint64_t fnv1a64(std::string_view bytes) {
  Fnv1a64 h;
  h.update(bytes);
  return h.digest();
}

// 16 lowercase hex digits, zero padded.
std::string hex_digest(std::uint64_t value);

// Inverse of hex_digest. Accepts an optional "0x" prefix; throws
// Error(kMalformedLog) on anything else.
std::uint64_t parse_hex_digest(std::string_view text);

}  // namespace oaq
