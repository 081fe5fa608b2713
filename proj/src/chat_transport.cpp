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

#include "oaq/chat_transport.hpp"

#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "oaq/error.hpp"

namespace oaq {

using nlohmann::json;

std::string chat_request_body(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  json body = {{"model", request.model}, {"messages", std::move(messages)}};
  if (request.temperature) body["temperature"] = *request.temperature;
  return body.dump();
}

std::string parse_chat_completion(std::string_view body) {
  const json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw TransportError("response is not a JSON object");
  }
  const auto choices = doc.find("choices");
  if (choices == doc.end() || !choices->is_array() || choices->empty()) {
    throw TransportError("response has no choices");
  }
  const json& first = choices->front();
  if (!first.contains("message") || !first["message"].contains("content")) {
    throw TransportError("response choice has no message content");
  }
  const json& content = first["message"]["content"];
  if (content.is_null()) return "";
  if (!content.is_string()) throw TransportError("message content is not a string");
  return content.get<std::string>();
}

InFlightLimiter::InFlightLimiter(int limit) : limit_(limit < 1 ? 1 : limit) {}

void InFlightLimiter::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return active_ < limit_; });
  ++active_;
  if (active_ > peak_) peak_ = active_;
}

void InFlightLimiter::release() {
  {
    std::lock_guard lock(mu_);
    --active_;
  }
  cv_.notify_one();
}

int InFlightLimiter::peak() const {
  std::lock_guard lock(mu_);
  return peak_;
}

namespace {
std::mutex g_limiter_mu;
std::shared_ptr<InFlightLimiter> g_limiter;
}  // namespace

std::shared_ptr<InFlightLimiter> global_in_flight_limiter() {
  std::lock_guard lock(g_limiter_mu);
  if (!g_limiter) g_limiter = std::make_shared<InFlightLimiter>(kDefaultInFlightLimit);
  return g_limiter;
}

void set_global_in_flight_limit(int limit) {
  std::lock_guard lock(g_limiter_mu);
  g_limiter = std::make_shared<InFlightLimiter>(limit);
}

Endpoint parse_endpoint(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(Errc::kInvalidConfig, "endpoint_url needs a scheme: " + std::string(url));
  }
  const std::string_view scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(Errc::kInvalidConfig, "unsupported endpoint scheme: " + std::string(scheme));
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") {
    throw Error(Errc::kInvalidConfig, "https endpoints need a build with OpenSSL");
  }
#endif
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint ep;
  ep.scheme_host_port = std::string(url.substr(0, path_start));
  ep.path = path_start == std::string_view::npos ? "/" : std::string(url.substr(path_start));
  if (ep.scheme_host_port.size() <= scheme_end + 3) {
    throw Error(Errc::kInvalidConfig, "endpoint_url has no host: " + std::string(url));
  }
  return ep;
}

HttpChatTransport::HttpChatTransport(std::string endpoint_url, std::string api_key_env_var,
                                     std::chrono::milliseconds timeout,
                                     std::shared_ptr<InFlightLimiter> limiter, RetryPolicy retry)
    : endpoint_(parse_endpoint(endpoint_url)),
      api_key_env_var_(std::move(api_key_env_var)),
      timeout_(timeout),
      limiter_(std::move(limiter)),
      retry_(retry) {}

std::string HttpChatTransport::complete(const ChatRequest& request) {
  httplib::Headers headers;
  if (!api_key_env_var_.empty()) {
    const char* key = std::getenv(api_key_env_var_.c_str());
    if (key == nullptr || *key == '\0') {
      throw TransportError("environment variable " + api_key_env_var_ + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const std::string body = chat_request_body(request);

  std::string last_error;
  auto backoff = retry_.initial_backoff;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff = std::min(backoff * 2, retry_.max_backoff);
    }
    httplib::Result res{nullptr, httplib::Error::Unknown};
    {
      InFlightLimiter::Permit permit(*limiter_);
      httplib::Client client(endpoint_.scheme_host_port);
      const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
      const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
      client.set_connection_timeout(secs.count(), usecs.count());
      client.set_read_timeout(secs.count(), usecs.count());
      client.set_write_timeout(secs.count(), usecs.count());
      res = client.Post(endpoint_.path, headers, body, "application/json");
    }
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return parse_chat_completion(res->body);
    last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200);
    const bool transient = res->status == 429 || res->status >= 500;
    if (!transient) break;
  }
  throw TransportError(endpoint_.scheme_host_port + endpoint_.path + ": " + last_error);
}

}  // namespace oaq
