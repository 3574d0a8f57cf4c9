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

// Completion client: decoding defaults, retries with exponential backoff, a
// requests-per-second ceiling, a prompt-length guard and an ordered batch
// executor. Backends are pluggable; see mock.hpp and http_backend.hpp.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "claimcheck/core.hpp"
#include "claimcheck/tokenizer.hpp"

namespace claimcheck {

struct DecodingParams {
  double temperature = 1.0;
  double top_p = 0.95;
  int top_k = 64;
  int max_new_tokens = 378;

  void validate() const {
    if (!std::isfinite(temperature) || temperature < 0.0) {
      throw Error(ErrorCode::kInvalidParams, "temperature must be >= 0");
    }
    if (!std::isfinite(top_p) || top_p <= 0.0 || top_p > 1.0) {
      throw Error(ErrorCode::kInvalidParams, "top_p must be in (0, 1]");
    }
    if (top_k < 1) throw Error(ErrorCode::kInvalidParams, "top_k must be positive");
    if (max_new_tokens < 1) throw Error(ErrorCode::kInvalidParams, "max_new_tokens must be positive");
  }

  friend bool operator==(const DecodingParams&, const DecodingParams&) = default;
};

inline constexpr std::size_t kDefaultMaxPromptTokens = 4306;

struct CompletionRequest {
  std::string id;
  std::string prompt;
  DecodingParams params;
  std::optional<std::string> stop;
};

struct CompletionResult {
  std::string request_id;
  std::string text;
  std::chrono::milliseconds latency{0};
  int attempts = 1;
};

// Thrown by backends for failures worth retrying (timeouts, 429, 5xx).
class TransientBackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Backend {
 public:
  virtual ~Backend() = default;
  // Must be safe to call concurrently.
  virtual std::string generate(const CompletionRequest& request) = 0;
  virtual std::string name() const = 0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

inline Sleeper real_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{20000};

  // Delay after the given failed attempt (1-based).
  std::chrono::milliseconds backoff_after(int attempt) const {
    const double raw = static_cast<double>(initial_backoff.count()) *
                       std::pow(multiplier, static_cast<double>(std::max(0, attempt - 1)));
    const double capped = std::min(raw, static_cast<double>(max_backoff.count()));
    return std::chrono::milliseconds(static_cast<std::int64_t>(capped));
  }
};

// Spaces request starts at least 1/rps apart. rps <= 0 disables the limit.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;

  RateLimiter(double requests_per_second, Sleeper sleeper)
      : sleeper_(std::move(sleeper)) {
    if (requests_per_second > 0.0) {
      interval_ = std::chrono::duration_cast<Clock::duration>(
          std::chrono::duration<double>(1.0 / requests_per_second));
    }
  }

  void acquire() {
    if (interval_ == Clock::duration::zero()) return;
    Clock::time_point slot;
    {
      std::lock_guard<std::mutex> lock(mu_);
      const auto now = Clock::now();
      slot = std::max(now, next_slot_);
      next_slot_ = slot + interval_;
    }
    const auto wait = slot - Clock::now();
    if (wait > Clock::duration::zero()) {
      sleeper_(std::chrono::ceil<std::chrono::milliseconds>(wait));
    }
  }

 private:
  Sleeper sleeper_;
  Clock::duration interval_{Clock::duration::zero()};
  std::mutex mu_;
  Clock::time_point next_slot_{};
};

struct ClientConfig {
  RetryPolicy retry;
  double requests_per_second = 0.0;
  std::size_t max_prompt_tokens = kDefaultMaxPromptTokens;
  std::shared_ptr<const Tokenizer> tokenizer = std::make_shared<WhitespaceTokenizer>();
  Sleeper sleeper = real_sleeper();
};

// One batch slot: a result or the error that ended that request.
struct BatchItem {
  std::string request_id;
  std::optional<CompletionResult> result;
  std::optional<Error> error;

  bool ok() const { return result.has_value(); }
};

class Client {
 public:
  Client(std::shared_ptr<Backend> backend, ClientConfig config = {})
      : backend_(std::move(backend)),
        config_(std::move(config)),
        limiter_(config_.requests_per_second, config_.sleeper) {
    if (!backend_) throw Error(ErrorCode::kConfig, "client needs a backend");
    if (config_.retry.max_attempts < 1) throw Error(ErrorCode::kConfig, "max_attempts must be >= 1");
    if (!config_.tokenizer) config_.tokenizer = std::make_shared<WhitespaceTokenizer>();
  }

  const ClientConfig& config() const { return config_; }
  Backend& backend() { return *backend_; }

  CompletionResult complete(const CompletionRequest& request) {
    request.params.validate();
    if (text::is_blank(request.prompt)) throw Error(ErrorCode::kInvalidParams, "empty prompt");
    const auto tokens = config_.tokenizer->count(request.prompt);
    if (tokens > config_.max_prompt_tokens) {
      throw Error(ErrorCode::kPromptTooLong, request.id + ": " + std::to_string(tokens) + " > " +
                                                 std::to_string(config_.max_prompt_tokens) +
                                                 " tokens");
    }

    const auto start = std::chrono::steady_clock::now();
    for (int attempt = 1;; ++attempt) {
      limiter_.acquire();
      try {
        CompletionResult out;
        out.request_id = request.id;
        out.text = backend_->generate(request);
        out.attempts = attempt;
        out.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);
        return out;
      } catch (const TransientBackendError& e) {
        if (attempt >= config_.retry.max_attempts) {
          throw Error(ErrorCode::kBackendExhausted, request.id + " after " +
                                                        std::to_string(attempt) +
                                                        " attempts: " + e.what());
        }
        config_.sleeper(config_.retry.backoff_after(attempt));
      } catch (const std::exception& e) {
        throw Error(ErrorCode::kBackendExhausted,
                    request.id + " non-retryable failure on attempt " + std::to_string(attempt) +
                        ": " + e.what());
      }
    }
  }

  // Results come back in input order. At most `parallelism` requests are in
  // flight; a failed request fills its own slot and never aborts the batch.
  std::vector<BatchItem> complete_batch(std::span<const CompletionRequest> requests,
                                        std::size_t parallelism) {
    if (parallelism < 1) throw Error(ErrorCode::kInvalidParams, "parallelism must be >= 1");
    std::vector<BatchItem> slots(requests.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next.fetch_add(1); i < requests.size(); i = next.fetch_add(1)) {
        slots[i].request_id = requests[i].id;
        try {
          slots[i].result = complete(requests[i]);
        } catch (const Error& e) {
          slots[i].error = e;
        } catch (const std::exception& e) {
          slots[i].error = Error(ErrorCode::kBackendExhausted, e.what());
        }
      }
    };
    const auto workers = std::min(parallelism, requests.size());
    if (workers <= 1) {
      worker();
      return slots;
    }
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    return slots;
  }

 private:
  std::shared_ptr<Backend> backend_;
  ClientConfig config_;
  RateLimiter limiter_;
};

}  // namespace claimcheck
