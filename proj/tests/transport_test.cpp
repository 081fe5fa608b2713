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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "oaq/chat_transport.hpp"
#include "oaq/error.hpp"

using namespace oaq;
using nlohmann::json;

namespace {

std::string completion(const std::string& content) {
  return json{{"choices", json::array({{{"message", {{"role", "assistant"}, {"content", content}}}}})}}
      .dump();
}

// Local chat-completions endpoint driven by a handler.
class MockServer {
 public:
  explicit MockServer(httplib::Server::Handler handler) {
    server_.Post("/v1/chat/completions", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

RetryPolicy fast_retry(int attempts = 4) {
  return RetryPolicy{attempts, std::chrono::milliseconds(5), std::chrono::milliseconds(20)};
}

ChatRequest hello() {
  ChatRequest r;
  r.model = "m";
  r.messages.push_back({"user", "hello"});
  return r;
}

}  // namespace

TEST_CASE("request body") {
  ChatRequest r = hello();
  json body = json::parse(chat_request_body(r));
  CHECK(body["model"] == "m");
  CHECK(body["messages"][0]["role"] == "user");
  CHECK(body["messages"][0]["content"] == "hello");
  CHECK_FALSE(body.contains("temperature"));
  r.temperature = 0.25;
  CHECK(json::parse(chat_request_body(r))["temperature"] == 0.25);
}

TEST_CASE("completion parsing") {
  CHECK(parse_chat_completion(completion("hi")) == "hi");
  CHECK(parse_chat_completion(R"({"choices":[{"message":{"content":null}}]})") == "");
  CHECK_THROWS_AS(parse_chat_completion("not json"), TransportError);
  CHECK_THROWS_AS(parse_chat_completion(R"({"choices":[]})"), TransportError);
  CHECK_THROWS_AS(parse_chat_completion(R"({"choices":[{"text":"x"}]})"), TransportError);
}

TEST_CASE("endpoint parsing") {
  const auto e = parse_endpoint("http://localhost:8080/v1/chat/completions");
  CHECK(e.scheme_host_port == "http://localhost:8080");
  CHECK(e.path == "/v1/chat/completions");
  CHECK(parse_endpoint("http://h").path == "/");
  CHECK_THROWS_AS(parse_endpoint("localhost:8080/x"), Error);
  CHECK_THROWS_AS(parse_endpoint("ftp://h/x"), Error);
  CHECK_THROWS_AS(parse_endpoint("http:///x"), Error);
}

TEST_CASE("successful call sends model, messages and bearer key") {
  std::string auth;
  std::string body;
  MockServer server([&](const httplib::Request& req, httplib::Response& res) {
    auth = req.get_header_value("Authorization");
    body = req.body;
    res.set_content(completion("ok"), "application/json");
  });
  setenv("OAQ_TRANSPORT_TEST_KEY", "k-123", 1);
  HttpChatTransport t(server.url(), "OAQ_TRANSPORT_TEST_KEY", std::chrono::milliseconds(2000),
                      std::make_shared<InFlightLimiter>(2), fast_retry());
  CHECK(t.complete(hello()) == "ok");
  CHECK(auth == "Bearer k-123");
  CHECK(json::parse(body)["messages"][0]["content"] == "hello");

  HttpChatTransport anonymous(server.url(), "", std::chrono::milliseconds(2000),
                              std::make_shared<InFlightLimiter>(2), fast_retry());
  CHECK(anonymous.complete(hello()) == "ok");
  CHECK(auth.empty());
}

TEST_CASE("unset key variable fails without a request") {
  std::atomic<int> hits{0};
  MockServer server([&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.set_content(completion("ok"), "application/json");
  });
  unsetenv("OAQ_TRANSPORT_MISSING_KEY");
  HttpChatTransport t(server.url(), "OAQ_TRANSPORT_MISSING_KEY", std::chrono::milliseconds(2000),
                      std::make_shared<InFlightLimiter>(1), fast_retry());
  CHECK_THROWS_AS(t.complete(hello()), TransportError);
  CHECK(hits == 0);
}

TEST_CASE("transient errors are retried, client errors are not") {
  std::atomic<int> hits{0};
  MockServer server([&](const httplib::Request& req, httplib::Response& res) {
    const int n = ++hits;
    const bool client_error = json::parse(req.body)["model"] == "bad";
    if (client_error) {
      res.status = 400;
    } else if (n <= 2) {
      res.status = n == 1 ? 503 : 429;
    } else {
      res.set_content(completion("third time"), "application/json");
    }
  });
  HttpChatTransport t(server.url(), "", std::chrono::milliseconds(2000),
                      std::make_shared<InFlightLimiter>(1), fast_retry());
  CHECK(t.complete(hello()) == "third time");
  CHECK(hits == 3);

  hits = 0;
  ChatRequest bad = hello();
  bad.model = "bad";
  CHECK_THROWS_AS(t.complete(bad), TransportError);
  CHECK(hits == 1);
}

TEST_CASE("persistent failure exhausts the retry budget") {
  std::atomic<int> hits{0};
  MockServer server([&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 500;
  });
  HttpChatTransport t(server.url(), "", std::chrono::milliseconds(2000),
                      std::make_shared<InFlightLimiter>(1), fast_retry(3));
  CHECK_THROWS_AS(t.complete(hello()), TransportError);
  CHECK(hits == 3);
}

TEST_CASE("unreachable endpoint and timeouts raise TransportError") {
  int dead_port = 0;
  {
    httplib::Server probe;
    dead_port = probe.bind_to_any_port("127.0.0.1");
  }
  HttpChatTransport dead("http://127.0.0.1:" + std::to_string(dead_port) + "/v1/chat/completions",
                         "", std::chrono::milliseconds(500), std::make_shared<InFlightLimiter>(1),
                         fast_retry(2));
  CHECK_THROWS_AS(dead.complete(hello()), TransportError);

  MockServer slow([&](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(600));
    res.set_content(completion("late"), "application/json");
  });
  HttpChatTransport impatient(slow.url(), "", std::chrono::milliseconds(100),
                              std::make_shared<InFlightLimiter>(1), fast_retry(1));
  CHECK_THROWS_AS(impatient.complete(hello()), TransportError);
}

TEST_CASE("in-flight limit holds across threads") {
  std::atomic<int> active{0};
  std::atomic<int> peak{0};
  MockServer server([&](const httplib::Request&, httplib::Response& res) {
    const int now = ++active;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(40));
    --active;
    res.set_content(completion("ok"), "application/json");
  });
  auto limiter = std::make_shared<InFlightLimiter>(2);
  std::vector<std::thread> pool;
  std::atomic<int> ok{0};
  for (int i = 0; i < 8; ++i) {
    pool.emplace_back([&] {
      HttpChatTransport t(server.url(), "", std::chrono::milliseconds(5000), limiter,
                          fast_retry());
      ok += t.complete(hello()) == "ok";
    });
  }
  for (auto& th : pool) th.join();
  CHECK(ok == 8);
  CHECK(limiter->peak() <= 2);
  CHECK(peak <= 2);
  CHECK(peak >= 1);
}

TEST_CASE("global limiter can be resized") {
  set_global_in_flight_limit(3);
  CHECK(global_in_flight_limiter()->limit() == 3);
  set_global_in_flight_limit(0);
  CHECK(global_in_flight_limiter()->limit() == 1);
  set_global_in_flight_limit(kDefaultInFlightLimit);
}
