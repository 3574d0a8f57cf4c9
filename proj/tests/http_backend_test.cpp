// Copyright 2026 The claimcheck Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "claimcheck/http_backend.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <mutex>
#include <string>
#include <thread>

namespace claimcheck {
namespace {

using nlohmann::json;

// Local chat-completion server. The first `throttle` calls get 429.
class FakeChatServer {
 public:
  explicit FakeChatServer(int throttle = 0) : throttle_(throttle) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      {
        std::lock_guard<std::mutex> lock(mu_);
        last_body_ = json::parse(req.body);
        last_auth_ = req.get_header_value("Authorization");
      }
      if (calls_++ < throttle_) {
        res.status = 429;
        return;
      }
      const auto prompt = last_body_["messages"][0]["content"].get<std::string>();
      if (prompt == "bad request") {
        res.status = 400;
        res.set_content(R"({"error":"nope"})", "application/json");
        return;
      }
      json reply{{"choices", {{{"message", {{"role", "assistant"}, {"content", "reply to " + prompt}}},
                               {"finish_reason", "stop"}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeChatServer() {
    server_.stop();
    thread_.join();
  }

  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
  int calls() const { return calls_.load(); }
  json last_body() {
    std::lock_guard<std::mutex> lock(mu_);
    return last_body_;
  }
  std::string last_auth() {
    std::lock_guard<std::mutex> lock(mu_);
    return last_auth_;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> calls_{0};
  int throttle_;
  std::mutex mu_;
  json last_body_;
  std::string last_auth_;
};

BackendConfig config_for(const FakeChatServer& s) {
  BackendConfig c;
  c.base_url = s.base_url();
  c.model = "test-model";
  c.timeout_seconds = 5;
  c.initial_backoff_ms = 1;
  c.send_top_k = true;
  return c;
}

TEST(HttpBackendTest, SendsChatCompletionRequest) {
  FakeChatServer server;
  auto cfg = config_for(server);
  Client client(std::make_shared<HttpChatBackend>(cfg, "sk-test"), cfg.client_config());
  CompletionRequest r{"r1", "is it so?", DecodingParams{0.5, 0.9, 10, 100}, std::string("</SOLUTION>")};
  const auto result = client.complete(r);
  EXPECT_EQ(result.text, "reply to is it so?");
  const auto body = server.last_body();
  EXPECT_EQ(body["model"], "test-model");
  EXPECT_EQ(body["messages"][0]["role"], "user");
  EXPECT_DOUBLE_EQ(body["temperature"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(body["top_p"].get<double>(), 0.9);
  EXPECT_EQ(body["top_k"], 10);
  EXPECT_EQ(body["max_tokens"], 100);
  EXPECT_FALSE(body.contains("stop"));
  EXPECT_EQ(server.last_auth(), "Bearer sk-test");
}

TEST(HttpBackendTest, RetriesThrottledRequests) {
  FakeChatServer server(2);
  auto cfg = config_for(server);
  Client client(std::make_shared<HttpChatBackend>(cfg, "k"), cfg.client_config());
  const auto result = client.complete(CompletionRequest{"r", "hi", {}, std::nullopt});
  EXPECT_EQ(result.attempts, 3);
  EXPECT_EQ(server.calls(), 3);
}

TEST(HttpBackendTest, ClientErrorIsNotRetried) {
  FakeChatServer server;
  auto cfg = config_for(server);
  Client client(std::make_shared<HttpChatBackend>(cfg, "k"), cfg.client_config());
  try {
    client.complete(CompletionRequest{"r", "bad request", {}, std::nullopt});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code, ErrorCode::kBackendExhausted);
  }
  EXPECT_EQ(server.calls(), 1);
}

TEST(HttpBackendTest, UnreachableServerExhaustsRetries) {
  BackendConfig cfg;
  cfg.base_url = "http://127.0.0.1:1/v1";
  cfg.max_attempts = 2;
  cfg.initial_backoff_ms = 1;
  cfg.timeout_seconds = 1;
  Client client(std::make_shared<HttpChatBackend>(cfg, "k"), cfg.client_config());
  EXPECT_THROW(client.complete(CompletionRequest{"r", "x", {}, std::nullopt}), Error);
}

TEST(HttpBackendTest, StopMarkerRestoredWhenRequested) {
  const std::string body =
      R"({"choices":[{"message":{"content":"<REASONING>r</REASONING><SOLUTION>YES"},"finish_reason":"stop"}]})";
  EXPECT_EQ(HttpChatBackend::completion_text(body, std::string("</SOLUTION>")),
            "<REASONING>r</REASONING><SOLUTION>YES</SOLUTION>");
  EXPECT_EQ(HttpChatBackend::completion_text(body), "<REASONING>r</REASONING><SOLUTION>YES");
}

TEST(BackendConfigTest, ParsesAndValidates) {
  const auto c = backend_config_from_json(json{{"base_url", "http://x/v1"}, {"model", "m"}, {"parallelism", 8}});
  EXPECT_EQ(c.model, "m");
  EXPECT_EQ(c.parallelism, 8u);
  EXPECT_EQ(c.api_key_env, "CLAIMCHECK_API_KEY");
  EXPECT_EQ(c.max_prompt_tokens, 4306u);
  EXPECT_THROW(backend_config_from_json(json{{"base_url", "no-scheme"}}), Error);
  EXPECT_THROW(backend_config_from_json(json{{"max_attempts", 0}}), Error);
  EXPECT_THROW(backend_config_from_json(json{{"model", 3}}), Error);
}

}  // namespace
}  // namespace claimcheck
