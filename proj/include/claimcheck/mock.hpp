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

// Deterministic backend for tests and --mock runs. Completions are looked up
// by prompt digest; personas fill the table from a dataset with planted,
// seeded behaviour (oracle disagreement, malformed replies, bad claim pairs).

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "claimcheck/client.hpp"
#include "claimcheck/core.hpp"
#include "claimcheck/digest.hpp"
#include "claimcheck/gsmclaims.hpp"
#include "claimcheck/prompts.hpp"
#include "claimcheck/rng.hpp"

namespace claimcheck {

class MockBackend final : public Backend {
 public:
  MockBackend() = default;
  explicit MockBackend(std::string fallback) : fallback_(std::move(fallback)) {}

  void set_response(std::string_view prompt, std::string completion) {
    std::lock_guard<std::mutex> lock(mu_);
    table_[sha256_hex(prompt)] = std::move(completion);
  }

  // The next `times` calls with this prompt fail with a transient error.
  void fail_transiently(std::string_view prompt, int times) {
    std::lock_guard<std::mutex> lock(mu_);
    transient_[sha256_hex(prompt)] = times;
  }

  void fail_permanently(std::string_view prompt) {
    std::lock_guard<std::mutex> lock(mu_);
    permanent_.insert(sha256_hex(prompt));
  }

  std::string generate(const CompletionRequest& request) override {
    const auto key = sha256_hex(request.prompt);
    std::lock_guard<std::mutex> lock(mu_);
    log_.push_back(request);
    if (auto it = transient_.find(key); it != transient_.end() && it->second > 0) {
      --it->second;
      throw TransientBackendError("mock transient failure");
    }
    if (permanent_.count(key) != 0) throw TransientBackendError("mock permanent failure");
    if (auto it = table_.find(key); it != table_.end()) return it->second;
    if (fallback_) return *fallback_;
    throw Error(ErrorCode::kInvalidInput, "mock has no completion for prompt " + key.substr(0, 12));
  }

  std::string name() const override { return "mock"; }

  std::vector<CompletionRequest> requests() const {
    std::lock_guard<std::mutex> lock(mu_);
    return log_;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return table_.size();
  }

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> table_;
  std::unordered_map<std::string, int> transient_;
  std::set<std::string> permanent_;
  std::optional<std::string> fallback_;
  std::vector<CompletionRequest> log_;
};

// kExact plants round(rate * N) affected items; kBernoulli draws each item
// independently with probability `rate`.
enum class PlantMode { kExact, kBernoulli };

struct OraclePersona {
  double disagree_rate = 0.0;
  double malformed_rate = 0.0;
  PlantMode mode = PlantMode::kExact;
  std::uint64_t seed = 0;
};

enum class OracleFate { kAgree, kDisagree, kMalformed };

namespace detail {

// Per-item fates, in input order.
inline std::vector<OracleFate> plant_fates(std::span<const std::string> ids, double disagree_rate,
                                           double malformed_rate, PlantMode mode,
                                           std::uint64_t seed) {
  std::vector<OracleFate> fates(ids.size(), OracleFate::kAgree);
  if (mode == PlantMode::kExact) {
    std::vector<std::size_t> order(ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto rng = make_rng(seed, 0x0Au);
    seeded_shuffle(std::span<std::size_t>(order), rng);
    const auto n = static_cast<double>(ids.size());
    const auto disagree = static_cast<std::size_t>(std::llround(disagree_rate * n));
    const auto malformed = std::min(static_cast<std::size_t>(std::llround(malformed_rate * n)),
                                    ids.size() - std::min(disagree, ids.size()));
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k < disagree) {
        fates[order[k]] = OracleFate::kDisagree;
      } else if (k < disagree + malformed) {
        fates[order[k]] = OracleFate::kMalformed;
      }
    }
  } else {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto rng = make_rng(seed, digest64(ids[i]));
      const double u = uniform_unit(rng);
      if (u < disagree_rate) {
        fates[i] = OracleFate::kDisagree;
      } else if (u < disagree_rate + malformed_rate) {
        fates[i] = OracleFate::kMalformed;
      }
    }
  }
  return fates;
}

}  // namespace detail

inline std::string mock_oracle_completion(const GroundedPair& pair, Verdict verdict) {
  return "<reasoning>\nThe claim under review is: " + std::string(text::trim(pair.claim)) +
         "\nI compared each stated fact with the document.\nThe document " +
         (verdict == Verdict::kSupported ? "states these facts directly."
                                         : "does not establish these facts.") +
         "\n</reasoning>\n<entailment>\n" + std::string(render(verdict)) + "\n</entailment>";
}

// Fills the mock with one oracle completion per pair and returns the planted
// fates. Pairs need gold labels.
inline std::vector<OracleFate> plant_oracle(MockBackend& mock, std::span<const GroundedPair> pairs,
                                            const OraclePersona& persona) {
  std::vector<std::string> ids;
  ids.reserve(pairs.size());
  for (const auto& p : pairs) ids.push_back(p.id);
  auto fates = detail::plant_fates(ids, persona.disagree_rate, persona.malformed_rate, persona.mode,
                                   persona.seed);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& pair = pairs[i];
    if (!pair.gold) throw Error(ErrorCode::kInvalidInput, "oracle persona needs gold for " + pair.id);
    std::string prompt;
    try {
      prompt = render_oracle_prompt(pair).text;
    } catch (const Error&) {
      continue;
    }
    switch (fates[i]) {
      case OracleFate::kAgree: mock.set_response(prompt, mock_oracle_completion(pair, *pair.gold)); break;
      case OracleFate::kDisagree:
        mock.set_response(prompt, mock_oracle_completion(pair, flip(*pair.gold)));
        break;
      case OracleFate::kMalformed:
        mock.set_response(prompt, "I believe the claim is probably fine, but I cannot say.");
        break;
    }
  }
  return fates;
}

struct GsmPersona {
  // Problems whose reply repeats the correct value in the negative claim.
  std::set<std::string> invalid_ids;
  // Problems whose reply wraps the JSON in prose.
  std::set<std::string> prose_ids;
  std::uint64_t seed = 0;
};

inline std::string mock_gsm_reply(const GsmProblem& problem, bool invalid, bool prose,
                                  std::uint64_t seed) {
  const auto answer = final_answer(problem.answer).value_or("0");
  std::string wrong = answer;
  if (!invalid) {
    auto rng = make_rng(seed, digest64(problem.id));
    const double value = std::stod(answer);
    const auto offset = static_cast<double>(1 + uniform_below(rng, 9));
    const double w = value + (uniform_below(rng, 2) == 0 ? offset : -offset);
    nlohmann::json num = w;
    if (w == std::floor(w) && std::fabs(w) < 1e15) num = static_cast<long long>(w);
    wrong = num.dump();
  }
  nlohmann::json j;
  j["document"] = std::string(text::trim(problem.question));
  j["positive_claim"] = "Working through the problem gives a final answer of " + answer + ".";
  j["negative_claim"] = "Working through the problem gives a final answer of " + wrong + ".";
  const auto body = j.dump();
  return prose ? "Sure! Here is the JSON you asked for:\n" + body : body;
}

inline void plant_gsm(MockBackend& mock, std::span<const GsmProblem> problems, const GsmPersona& persona) {
  for (const auto& p : problems) {
    std::string prompt;
    try {
      prompt = render_gsmclaims_prompt(p.question, p.answer).text;
    } catch (const Error&) {
      continue;
    }
    mock.set_response(prompt, mock_gsm_reply(p, persona.invalid_ids.count(p.id) != 0,
                                              persona.prose_ids.count(p.id) != 0, persona.seed));
  }
}

}  // namespace claimcheck
