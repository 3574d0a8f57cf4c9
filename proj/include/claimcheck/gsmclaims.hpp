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

// Math word problems -> balanced claim-verification instances. One oracle call
// per problem yields a document plus a positive and a negative claim; each
// valid pair expands to one SUPPORTED and one NOT_SUPPORTED instance.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "claimcheck/client.hpp"
#include "claimcheck/core.hpp"
#include "claimcheck/prompts.hpp"
#include "claimcheck/rng.hpp"

namespace claimcheck {

struct GsmProblem {
  std::string id;
  std::string question;
  std::string answer;  // worked solution, usually ending in "#### <value>"
};

struct ClaimPairRecord {
  std::string source_id;
  std::string document;
  std::string positive_claim;
  std::string negative_claim;
};

inline constexpr std::string_view kGsmClaimsSource = "gsmclaims";

// Last number in the text, as written (thousands separators removed).
inline std::optional<std::string> last_numeric_token(std::string_view s) {
  std::optional<std::string> last;
  std::size_t i = 0;
  auto digit = [&](std::size_t k) { return k < s.size() && s[k] >= '0' && s[k] <= '9'; };
  while (i < s.size()) {
    if (!digit(i)) {
      ++i;
      continue;
    }
    std::string tok;
    if (i > 0 && s[i - 1] == '-' && (i < 2 || !digit(i - 2))) tok.push_back('-');
    while (i < s.size()) {
      if (digit(i)) {
        tok.push_back(s[i++]);
      } else if (s[i] == ',' && digit(i + 1) && digit(i + 2) && digit(i + 3) && !digit(i + 4)) {
        ++i;
      } else if (s[i] == '.' && digit(i + 1) && tok.find('.') == std::string::npos) {
        tok.push_back(s[i++]);
      } else {
        break;
      }
    }
    last = tok;
  }
  return last;
}

inline std::optional<double> last_number(std::string_view s) {
  auto tok = last_numeric_token(s);
  if (!tok) return std::nullopt;
  return std::stod(*tok);
}

// GSM8K solutions end in "#### value"; otherwise take the last number.
inline std::optional<std::string> final_answer(std::string_view solution) {
  const auto marker = solution.rfind("####");
  if (marker != std::string_view::npos) {
    if (auto tok = last_numeric_token(solution.substr(marker))) return tok;
  }
  return last_numeric_token(solution);
}

// First balanced {...} in the text, skipping braces inside JSON strings.
inline std::optional<std::string_view> first_json_object(std::string_view s) {
  const auto start = s.find('{');
  if (start == std::string_view::npos) return std::nullopt;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}' && --depth == 0) {
      return s.substr(start, i - start + 1);
    }
  }
  return std::nullopt;
}

inline void validate(const ClaimPairRecord& r) {
  if (text::is_blank(r.document)) throw Error(ErrorCode::kInvalidPair, r.source_id + ": empty document");
  if (text::is_blank(r.positive_claim) || text::is_blank(r.negative_claim)) {
    throw Error(ErrorCode::kInvalidPair, r.source_id + ": empty claim");
  }
  if (text::trim(r.positive_claim) == text::trim(r.negative_claim)) {
    throw Error(ErrorCode::kInvalidPair, r.source_id + ": claims are identical");
  }
  const auto pos = last_number(r.positive_claim);
  const auto neg = last_number(r.negative_claim);
  if (!pos || !neg) throw Error(ErrorCode::kInvalidPair, r.source_id + ": claim without a number");
  if (*pos == *neg) {
    throw Error(ErrorCode::kInvalidPair, r.source_id + ": both claims state the value " +
                                             *last_numeric_token(r.positive_claim));
  }
}

// Strict mode requires the reply to be exactly one JSON object; lenient mode
// takes the first balanced object found anywhere in it.
inline ClaimPairRecord parse_claim_pair(std::string_view raw, std::string source_id, bool strict = true) {
  std::string_view body = text::trim(raw);
  if (strict) {
    if (body.empty() || body.front() != '{' || body.back() != '}') {
      throw Error(ErrorCode::kMalformedJson, source_id + ": reply is not a bare JSON object");
    }
  } else {
    auto obj = first_json_object(body);
    if (!obj) throw Error(ErrorCode::kMalformedJson, source_id + ": no JSON object in reply");
    body = *obj;
  }
  nlohmann::json j = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kMalformedJson, source_id + ": unparseable JSON");
  }
  ClaimPairRecord r;
  r.source_id = std::move(source_id);
  auto field = [&](const char* key, std::string& dst) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      throw Error(ErrorCode::kMalformedJson, r.source_id + ": missing string key '" + key + "'");
    }
    dst = it->get<std::string>();
  };
  field("document", r.document);
  field("positive_claim", r.positive_claim);
  field("negative_claim", r.negative_claim);
  return r;
}

inline CompletionRequest gsmclaims_request(const GsmProblem& problem, const DecodingParams& params) {
  return CompletionRequest{problem.id, render_gsmclaims_prompt(problem.question, problem.answer).text,
                           params, std::nullopt};
}

inline ClaimPairRecord generate_claim_pair(const GsmProblem& problem, Client& client,
                                           const DecodingParams& params = {}, bool strict = true) {
  const auto result = client.complete(gsmclaims_request(problem, params));
  auto record = parse_claim_pair(result.text, problem.id, strict);
  validate(record);
  return record;
}

inline std::array<GroundedPair, 2> expand_to_instances(const ClaimPairRecord& r) {
  return {GroundedPair{r.source_id + "-pos", r.positive_claim, r.document, Verdict::kSupported,
                       std::string(kGsmClaimsSource)},
          GroundedPair{r.source_id + "-neg", r.negative_claim, r.document, Verdict::kNotSupported,
                       std::string(kGsmClaimsSource)}};
}

struct GsmBuildOptions {
  DecodingParams params;
  std::size_t parallelism = 4;
  std::uint64_t seed = 0;
  bool strict_json = true;
};

struct GsmFailure {
  std::string problem_id;
  ErrorCode code;
  std::string message;
};

struct GsmBuildStats {
  std::size_t problems = 0;
  std::size_t generated = 0;
  std::size_t failed = 0;
  std::size_t failed_malformed_json = 0;
  std::size_t failed_invalid_pair = 0;
  std::size_t failed_backend = 0;
  std::size_t failed_invalid_input = 0;
  std::size_t instances = 0;
  std::size_t supported = 0;
  std::size_t not_supported = 0;

  // Share of SUPPORTED instances; 0 for an empty dataset.
  double balance() const {
    return instances == 0 ? 0.0 : static_cast<double>(supported) / static_cast<double>(instances);
  }
};

struct GsmBuildResult {
  std::vector<GroundedPair> dataset;
  std::vector<ClaimPairRecord> records;
  std::vector<GsmFailure> failures;
  GsmBuildStats stats;
};

// Each problem contributes both instances or neither, so label balance holds
// under any failure pattern. Content failures are recorded, not retried.
inline GsmBuildResult build_gsmclaims(std::span<const GsmProblem> problems, Client& client,
                                      const GsmBuildOptions& options = {}) {
  GsmBuildResult out;
  out.stats.problems = problems.size();

  std::vector<CompletionRequest> requests;
  std::vector<std::size_t> request_of(problems.size(), SIZE_MAX);
  for (std::size_t i = 0; i < problems.size(); ++i) {
    try {
      requests.push_back(gsmclaims_request(problems[i], options.params));
      request_of[i] = requests.size() - 1;
    } catch (const Error& e) {
      out.failures.push_back({problems[i].id, e.code, e.what()});
    }
  }
  const auto replies = client.complete_batch(requests, options.parallelism);

  for (std::size_t i = 0; i < problems.size(); ++i) {
    if (request_of[i] == SIZE_MAX) continue;
    const auto& reply = replies[request_of[i]];
    if (!reply.ok()) {
      out.failures.push_back({problems[i].id, reply.error->code, reply.error->what()});
      continue;
    }
    try {
      auto record = parse_claim_pair(reply.result->text, problems[i].id, options.strict_json);
      validate(record);
      for (auto& inst : expand_to_instances(record)) out.dataset.push_back(std::move(inst));
      out.records.push_back(std::move(record));
    } catch (const Error& e) {
      out.failures.push_back({problems[i].id, e.code, e.what()});
    }
  }

  for (const auto& f : out.failures) {
    switch (f.code) {
      case ErrorCode::kMalformedJson: ++out.stats.failed_malformed_json; break;
      case ErrorCode::kInvalidPair: ++out.stats.failed_invalid_pair; break;
      case ErrorCode::kEmptyField: ++out.stats.failed_invalid_input; break;
      default: ++out.stats.failed_backend; break;
    }
  }
  out.stats.failed = out.failures.size();
  out.stats.generated = out.records.size();
  out.stats.instances = out.dataset.size();
  for (const auto& p : out.dataset) {
    (p.gold == Verdict::kSupported ? out.stats.supported : out.stats.not_supported) += 1;
  }

  auto rng = make_rng(options.seed, 0x65u);
  seeded_shuffle(std::span<GroundedPair>(out.dataset), rng);
  return out;
}

}  // namespace claimcheck
