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

// Minimal chat-completions client: one user message in, the first choice's
// message content out.

#pragma once

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oaq {

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  std::optional<double> temperature;
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  // Returns the assistant message text. Throws TransportError.
  virtual std::string complete(const ChatRequest& request) = 0;
};

// JSON body for POST /chat/completions.
std::string chat_request_body(const ChatRequest& request);

// Extracts choices[0].message.content. Throws TransportError.
std::string parse_chat_completion(std::string_view body);

// Caps concurrent requests across every transport sharing it.
class InFlightLimiter {
 public:
  explicit InFlightLimiter(int limit);

  class Permit {
   public:
    explicit Permit(InFlightLimiter& owner) : owner_(&owner) { owner_->acquire(); }
    ~Permit() { owner_->release(); }
    Permit(const Permit&) = delete;
    Permit& operator=(const Permit&) = delete;

   private:
    InFlightLimiter* owner_;
  };

  int limit() const { return limit_; }
  int peak() const;

 private:
  void acquire();
  void release();

  int limit_;
  int active_ = 0;
  int peak_ = 0;
  mutable std::mutex mu_;
  std::condition_variable cv_;
};

inline constexpr int kDefaultInFlightLimit = 4;

// Process-wide limiter. set_global_in_flight_limit only affects limiters
// handed out afterwards.
std::shared_ptr<InFlightLimiter> global_in_flight_limiter();
void set_global_in_flight_limit(int limit);

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{8'000};
};

struct Endpoint {
  std::string scheme_host_port;  // e.g. "http://127.0.0.1:8080"
  std::string path;              // e.g. "/v1/chat/completions"
};

// Throws Error(kInvalidConfig) for anything that is not http(s)://host[:port]/path.
Endpoint parse_endpoint(std::string_view url);

class HttpChatTransport : public ChatTransport {
 public:
  HttpChatTransport(std::string endpoint_url, std::string api_key_env_var,
                    std::chrono::milliseconds timeout,
                    std::shared_ptr<InFlightLimiter> limiter = global_in_flight_limiter(),
                    RetryPolicy retry = {});

  // Retries connection failures, 429 and 5xx with exponential backoff.
  std::string complete(const ChatRequest& request) override;

 private:
  Endpoint endpoint_;
  std::string api_key_env_var_;
  std::chrono::milliseconds timeout_;
  std::shared_ptr<InFlightLimiter> limiter_;
  RetryPolicy retry_;
};

}  // namespace oaq
