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

// Total parsers for tagged model completions. Malformed input is reported
// through ParsedOutput, never thrown.

#include <optional>
#include <string>
#include <string_view>

#include "claimcheck/core.hpp"
#include "claimcheck/prompts.hpp"

namespace claimcheck {

struct ParsedOutput {
  std::optional<std::string> reasoning;
  std::optional<Verdict> verdict;
  // Both blocks present, reasoning strictly before solution, verdict valid.
  bool format_ok = false;
  std::string raw;
};

namespace detail {

struct TagBlock {
  std::string_view content;
  std::size_t open_pos = 0;
  std::size_t end_pos = 0;  // one past the closing tag
};

// First complete open...close block. Case-sensitive.
inline std::optional<TagBlock> find_block(std::string_view raw, std::string_view open,
                                          std::string_view close) {
  const auto o = raw.find(open);
  if (o == std::string_view::npos) return std::nullopt;
  const auto content_begin = o + open.size();
  const auto c = raw.find(close, content_begin);
  if (c == std::string_view::npos) return std::nullopt;
  return TagBlock{raw.substr(content_begin, c - content_begin), o, c + close.size()};
}

inline ParsedOutput parse_tagged(std::string_view raw, std::string_view reasoning_open,
                                 std::string_view reasoning_close, std::string_view verdict_open,
                                 std::string_view verdict_close) {
  ParsedOutput out;
  out.raw = std::string(raw);
  const auto reasoning = find_block(raw, reasoning_open, reasoning_close);
  const auto verdict = find_block(raw, verdict_open, verdict_close);
  if (reasoning) out.reasoning = std::string(text::trim(reasoning->content));
  if (verdict) out.verdict = try_verdict_from_token(verdict->content);
  out.format_ok = reasoning && verdict && reasoning->end_pos <= verdict->open_pos &&
                  out.verdict.has_value();
  return out;
}

}  // namespace detail

// Verifier format: <REASONING>...</REASONING> then <SOLUTION>YES|NO</SOLUTION>.
inline ParsedOutput parse_verifier_output(std::string_view raw) {
  return detail::parse_tagged(raw, tags::kReasoningOpen, tags::kReasoningClose,
                              tags::kSolutionOpen, tags::kSolutionClose);
}

// Oracle format: lowercase <reasoning> and <entailment> blocks.
inline ParsedOutput parse_oracle_output(std::string_view raw) {
  return detail::parse_tagged(raw, tags::kOracleReasoningOpen, tags::kOracleReasoningClose,
                              tags::kEntailmentOpen, tags::kEntailmentClose);
}

inline bool format_adherent(std::string_view raw) { return parse_verifier_output(raw).format_ok; }

// Solution-only outputs from the no-reasoning format. format_ok needs just
// the solution block.
inline ParsedOutput parse_nothink_output(std::string_view raw) {
  ParsedOutput out;
  out.raw = std::string(raw);
  if (auto block = detail::find_block(raw, tags::kSolutionOpen, tags::kSolutionClose)) {
    out.verdict = try_verdict_from_token(block->content);
  }
  out.format_ok = out.verdict.has_value();
  return out;
}

}  // namespace claimcheck
