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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "claimcheck/core.hpp"

namespace claimcheck {

// Error categories assigned by an external annotator.
enum class ErrorTag {
  kLexicalOverlap,
  kArithmetic,
  kOvercautious,
  kNegationTemporal,
  kInsufficientAggregation,
  kOther,
};

inline constexpr std::array<ErrorTag, 6> kAllErrorTags = {
    ErrorTag::kLexicalOverlap, ErrorTag::kArithmetic, ErrorTag::kOvercautious,
    ErrorTag::kNegationTemporal, ErrorTag::kInsufficientAggregation, ErrorTag::kOther};

inline std::string_view to_string(ErrorTag tag) {
  switch (tag) {
    case ErrorTag::kLexicalOverlap: return "lexical_overlap";
    case ErrorTag::kArithmetic: return "arithmetic";
    case ErrorTag::kOvercautious: return "overcautious";
    case ErrorTag::kNegationTemporal: return "negation_temporal";
    case ErrorTag::kInsufficientAggregation: return "insufficient_aggregation";
    case ErrorTag::kOther: return "other";
  }
  return "other";
}

inline std::optional<ErrorTag> parse_error_tag(std::string_view name) {
  std::string lower(text::trim(name));
  for (auto& c : lower) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c == '-' || c == ' ' || c == '/') c = '_';
  }
  for (auto tag : kAllErrorTags) {
    if (lower == to_string(tag)) return tag;
  }
  return std::nullopt;
}

// One scored prediction. A missing prediction means the output had no
// parseable verdict.
struct EvalRecord {
  std::string id;
  Verdict gold = Verdict::kNotSupported;
  std::optional<Verdict> predicted;
  std::optional<std::string> reasoning;
  std::string source;
  std::vector<ErrorTag> tags;

  bool correct() const { return predicted == gold; }
};

}  // namespace claimcheck
