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

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oaq {

struct Persona {
  std::string name;
  std::string instruction;

  friend bool operator==(const Persona&, const Persona&) = default;
};

// The five shipped personas. Their instruction texts are written for this
// project.
const std::vector<Persona>& builtin_personas();
std::optional<Persona> find_builtin_persona(std::string_view name);

struct LlmAgentConfig {
  std::string endpoint_url;
  std::string model_name;
  // Left to the endpoint default when unset.
  std::optional<double> temperature;
  int max_retries = 3;
  std::chrono::milliseconds request_timeout{60'000};
  Persona persona;
  // Name of the environment variable holding the API key. Empty means no
  // Authorization header. The key itself is never stored here.
  std::string api_key_env_var;

  // Throws Error(kInvalidConfig).
  void validate() const;

  friend bool operator==(const LlmAgentConfig&, const LlmAgentConfig&) = default;
};

}  // namespace oaq
