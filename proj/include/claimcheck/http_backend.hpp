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

#pragma once

// Chat-completion HTTP adapter (OpenAI-compatible wire format) and the JSON
// backend config file.
//
//   {
//     "base_url": "https://api.openai.com/v1",
//     "model": "gpt-4o-mini",
//     "api_key_env": "CLAIMCHECK_API_KEY",
//     "requests_per_second": 2.0,
//     "max_attempts": 4,
//     "initial_backoff_ms": 500,
//     "max_backoff_ms": 20000,
//     "timeout_seconds": 120,
//     "max_prompt_tokens": 4306,
//     "parallelism": 4,
//     "send_top_k": false,
//     "send_stop": false
//   }

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "claimcheck/client.hpp"
#include "claimcheck/core.hpp"
#include "claimcheck/io.hpp"

namespace claimcheck {

inline constexpr std::string_view kDefaultApiKeyEnv = "CLAIMCHECK_API_KEY";

struct BackendConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4o-mini";
  std::string api_key_env = std::string(kDefaultApiKeyEnv);
  double requests_per_second = 0.0;
  int max_attempts = 4;
  int initial_backoff_ms = 500;
  int max_backoff_ms = 20000;
  int timeout_seconds = 120;
  std::size_t max_prompt_tokens = kDefaultMaxPromptTokens;
  std::size_t parallelism = 4;
  // top_k is not part of every chat API; servers such as vLLM accept it.
  bool send_top_k = false;
  // Ask the server to halt at the prompt's stop marker. Servers strip the
  // stop text, so it is restored on a "stop" finish.
  bool send_stop = false;

  ClientConfig client_config() const {
    ClientConfig c;
    c.retry.max_attempts = max_attempts;
    c.retry.initial_backoff = std::chrono::milliseconds(initial_backoff_ms);
    c.retry.max_backoff = std::chrono::milliseconds(max_backoff_ms);
    c.requests_per_second = requests_per_second;
    c.max_prompt_tokens = max_prompt_tokens;
    return c;
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"base_url", base_url},
                          {"model", model},
                          {"api_key_env", api_key_env},
                          {"requests_per_second", requests_per_second},
                          {"max_attempts", max_attempts},
                          {"initial_backoff_ms", initial_backoff_ms},
                          {"max_backoff_ms", max_backoff_ms},
                          {"timeout_seconds", timeout_seconds},
                          {"max_prompt_tokens", max_prompt_tokens},
                          {"parallelism", parallelism},
                          {"send_top_k", send_top_k},
                          {"send_stop", send_stop}};
  }
};

inline BackendConfig backend_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "backend config must be a JSON object");
  BackendConfig c;
  try {
    c.base_url = j.value("base_url", c.base_url);
    c.model = j.value("model", c.model);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.requests_per_second = j.value("requests_per_second", c.requests_per_second);
    c.max_attempts = j.value("max_attempts", c.max_attempts);
    c.initial_backoff_ms = j.value("initial_backoff_ms", c.initial_backoff_ms);
    c.max_backoff_ms = j.value("max_backoff_ms", c.max_backoff_ms);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.max_prompt_tokens = j.value("max_prompt_tokens", c.max_prompt_tokens);
    c.parallelism = j.value("parallelism", c.parallelism);
    c.send_top_k = j.value("send_top_k", c.send_top_k);
    c.send_stop = j.value("send_stop", c.send_stop);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  if (c.max_attempts < 1 || c.parallelism < 1 || c.timeout_seconds < 1) {
    throw Error(ErrorCode::kConfig, "max_attempts, parallelism and timeout_seconds must be positive");
  }
  if (c.base_url.find("://") == std::string::npos) {
    throw Error(ErrorCode::kConfig, "base_url needs a scheme: " + c.base_url);
  }
  return c;
}

inline BackendConfig load_backend_config(const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(io::read_text_file(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kConfig, path.string() + " is not valid JSON");
  return backend_config_from_json(j);
}

// Environment lookup, injectable for tests.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

inline EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
}

class HttpChatBackend final : public Backend {
 public:
  HttpChatBackend(BackendConfig config, std::string api_key)
      : config_(std::move(config)), api_key_(std::move(api_key)) {
    const auto scheme_end = config_.base_url.find("://");
    const auto path_begin = config_.base_url.find('/', scheme_end + 3);
    origin_ = config_.base_url.substr(0, path_begin);
    path_prefix_ = path_begin == std::string::npos ? "" : config_.base_url.substr(path_begin);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  }

  std::string generate(const CompletionRequest& request) override {
    httplib::Client http(origin_);
    http.set_connection_timeout(std::chrono::seconds(std::min(config_.timeout_seconds, 30)));
    http.set_read_timeout(std::chrono::seconds(config_.timeout_seconds));
    http.set_write_timeout(std::chrono::seconds(config_.timeout_seconds));
    if (!api_key_.empty()) http.set_bearer_token_auth(api_key_);

    const auto body = request_body(request).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    auto res = http.Post(path_prefix_ + "/chat/completions", body, "application/json");
    if (!res) throw TransientBackendError("http: " + httplib::to_string(res.error()));
    if (res->status == 429 || res->status >= 500) {
      throw TransientBackendError("http status " + std::to_string(res->status));
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kBackendExhausted,
                  "http status " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    }
    return completion_text(res->body, config_.send_stop ? request.stop : std::nullopt);
  }

  std::string name() const override { return "http:" + config_.model; }

  nlohmann::json request_body(const CompletionRequest& request) const {
    nlohmann::json body{
        {"model", config_.model},
        {"messages", {{{"role", "user"}, {"content", request.prompt}}}},
        {"temperature", request.params.temperature},
        {"top_p", request.params.top_p},
        {"max_tokens", request.params.max_new_tokens},
    };
    if (config_.send_top_k) body["top_k"] = request.params.top_k;
    if (config_.send_stop && request.stop) body["stop"] = nlohmann::json::array({*request.stop});
    return body;
  }

  // choices[0].message.content, with `stop` restored on a "stop" finish.
  static std::string completion_text(std::string_view response_body,
                                     const std::optional<std::string>& stop = std::nullopt) {
    auto j = nlohmann::json::parse(response_body, nullptr, false);
    if (j.is_discarded()) throw TransientBackendError("backend returned invalid JSON");
    try {
      const auto& choice = j.at("choices").at(0);
      auto text = choice.at("message").at("content").get<std::string>();
      if (stop && choice.value("finish_reason", "") == "stop" &&
          text.find(*stop) == std::string::npos) {
        text += *stop;
      }
      return text;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kBackendExhausted, std::string("unexpected response shape: ") + e.what());
    }
  }

 private:
  BackendConfig config_;
  std::string api_key_;
  std::string origin_;
  std::string path_prefix_;
};

}  // namespace claimcheck
