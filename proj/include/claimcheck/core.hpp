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

// Domain types shared by every stage of the verification pipeline.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace claimcheck {

enum class ErrorCode {
  kUnrecognizedVerdict,
  kEmptyField,
  kTagCollision,
  kInvalidParams,
  kPromptTooLong,
  kBackendExhausted,
  kInvalidFraction,
  kIoFailure,
  kMalformedJson,
  kInvalidPair,
  kClassAbsent,
  kEmptySet,
  kUnpairedRecords,
  kTooFewRecords,
  kInvalidInput,
  kConfig,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnrecognizedVerdict: return "UnrecognizedVerdict";
    case ErrorCode::kEmptyField: return "EmptyField";
    case ErrorCode::kTagCollision: return "TagCollision";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kPromptTooLong: return "PromptTooLong";
    case ErrorCode::kBackendExhausted: return "BackendExhausted";
    case ErrorCode::kInvalidFraction: return "InvalidFraction";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kMalformedJson: return "MalformedJson";
    case ErrorCode::kInvalidPair: return "InvalidPair";
    case ErrorCode::kClassAbsent: return "ClassAbsent";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kUnpairedRecords: return "UnpairedRecords";
    case ErrorCode::kTooFewRecords: return "TooFewRecords";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kConfig: return "Config";
  }
  return "Unknown";
}

struct Error : public std::runtime_error {
  ErrorCode code;
  Error(ErrorCode code_, const std::string& message)
      : std::runtime_error(std::string(to_string(code_)) + ": " + message), code(code_) {}
};

namespace text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

inline bool is_blank(std::string_view s) { return trim(s).empty(); }

inline std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace text

// SUPPORTED is the positive class (bit 1).
enum class Verdict : std::uint8_t { kNotSupported = 0, kSupported = 1 };

inline int to_bit(Verdict v) { return v == Verdict::kSupported ? 1 : 0; }
inline Verdict from_bit(int bit) { return bit != 0 ? Verdict::kSupported : Verdict::kNotSupported; }
inline Verdict flip(Verdict v) {
  return v == Verdict::kSupported ? Verdict::kNotSupported : Verdict::kSupported;
}

// Token the verifier formats use for a verdict.
inline std::string_view render(Verdict v) { return v == Verdict::kSupported ? "YES" : "NO"; }

inline std::string_view label_name(Verdict v) {
  return v == Verdict::kSupported ? "SUPPORTED" : "NOT_SUPPORTED";
}

// Case-insensitive YES/NO after trimming whitespace and surrounding ASCII
// punctuation ("YES.", "\"NO\"").
inline std::optional<Verdict> try_verdict_from_token(std::string_view token) {
  auto s = text::trim(token);
  auto is_punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_punct(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_punct(s.back())) s.remove_suffix(1);
  const std::string upper = text::to_upper(text::trim(s));
  if (upper == "YES") return Verdict::kSupported;
  if (upper == "NO") return Verdict::kNotSupported;
  return std::nullopt;
}

inline Verdict verdict_from_token(std::string_view token) {
  if (auto v = try_verdict_from_token(token)) return *v;
  throw Error(ErrorCode::kUnrecognizedVerdict, "'" + std::string(text::trim(token)) + "'");
}

// Ingestion-side label normalization. Accepts bits, YES/NO, and dataset label
// names; refutation labels collapse to NOT_SUPPORTED.
inline std::optional<Verdict> try_parse_label(std::string_view label) {
  if (auto v = try_verdict_from_token(label)) return v;
  std::string upper = text::to_upper(text::trim(label));
  std::replace(upper.begin(), upper.end(), '-', '_');
  std::replace(upper.begin(), upper.end(), ' ', '_');
  if (upper == "1" || upper == "TRUE" || upper == "SUPPORTED" || upper == "SUPPORTS" ||
      upper == "ENTAILED" || upper == "ENTAILMENT") {
    return Verdict::kSupported;
  }
  if (upper == "0" || upper == "FALSE" || upper == "NOT_SUPPORTED" || upper == "NOTSUPPORTED" ||
      upper == "UNSUPPORTED" || upper == "REFUTES" || upper == "REFUTED" ||
      upper == "CONTRADICTION" || upper == "NOT_ENTAILED" || upper == "NOT_ENOUGH_INFO" ||
      upper == "NEI") {
    return Verdict::kNotSupported;
  }
  return std::nullopt;
}

struct GroundedPair {
  std::string id;
  std::string claim;
  std::string document;
  std::optional<Verdict> gold;
  std::string source;
};

// Throws EmptyField when claim or document is blank.
inline void require_content(const GroundedPair& pair) {
  if (text::is_blank(pair.claim)) throw Error(ErrorCode::kEmptyField, "claim of '" + pair.id + "'");
  if (text::is_blank(pair.document)) {
    throw Error(ErrorCode::kEmptyField, "document of '" + pair.id + "'");
  }
}

struct ReasoningExample {
  GroundedPair pair;
  std::string reasoning;
  Verdict verdict = Verdict::kNotSupported;
};

inline void validate(const ReasoningExample& ex) {
  require_content(ex.pair);
  if (text::is_blank(ex.reasoning)) throw Error(ErrorCode::kEmptyField, "reasoning of '" + ex.pair.id + "'");
  if (ex.pair.gold && *ex.pair.gold != ex.verdict) {
    throw Error(ErrorCode::kInvalidInput, "verdict disagrees with gold for '" + ex.pair.id + "'");
  }
}

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  std::size_t positives() const { return tp + fn; }
  std::size_t negatives() const { return tn + fp; }

  // Missing predictions are scored as wrong.
  void add(Verdict gold, std::optional<Verdict> predicted) {
    if (gold == Verdict::kSupported) {
      (predicted == Verdict::kSupported ? tp : fn) += 1;
    } else {
      (predicted == Verdict::kNotSupported ? tn : fp) += 1;
    }
  }

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

}  // namespace claimcheck
