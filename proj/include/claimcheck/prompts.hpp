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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "claimcheck/core.hpp"
#include "claimcheck/digest.hpp"
#include "claimcheck/templates.hpp"

namespace claimcheck {

enum class PromptKind { kOracleThink, kSftThink, kSftNoThink, kGsmClaims };

inline std::string_view to_string(PromptKind kind) {
  switch (kind) {
    case PromptKind::kOracleThink: return "oracle_think";
    case PromptKind::kSftThink: return "sft_think";
    case PromptKind::kSftNoThink: return "sft_nothink";
    case PromptKind::kGsmClaims: return "gsmclaims";
  }
  return "unknown";
}

inline std::string_view template_text(PromptKind kind) {
  switch (kind) {
    case PromptKind::kOracleThink: return templates::kOracleThink;
    case PromptKind::kSftThink: return templates::kSftThink;
    case PromptKind::kSftNoThink: return templates::kSftNoThink;
    case PromptKind::kGsmClaims: return templates::kGsmClaims;
  }
  return {};
}

inline constexpr std::array<PromptKind, 4> kAllPromptKinds = {
    PromptKind::kOracleThink, PromptKind::kSftThink, PromptKind::kSftNoThink,
    PromptKind::kGsmClaims};

// kind name -> sha256 of the template text.
inline std::map<std::string, std::string> template_checksums() {
  std::map<std::string, std::string> out;
  for (auto kind : kAllPromptKinds) out.emplace(to_string(kind), sha256_hex(template_text(kind)));
  return out;
}

namespace tags {
inline constexpr std::string_view kDocumentOpen = "<DOCUMENT>";
inline constexpr std::string_view kDocumentClose = "</DOCUMENT>";
inline constexpr std::string_view kClaimOpen = "<CLAIM>";
inline constexpr std::string_view kClaimClose = "</CLAIM>";
inline constexpr std::string_view kReasoningOpen = "<REASONING>";
inline constexpr std::string_view kReasoningClose = "</REASONING>";
inline constexpr std::string_view kSolutionOpen = "<SOLUTION>";
inline constexpr std::string_view kSolutionClose = "</SOLUTION>";
inline constexpr std::string_view kOracleReasoningOpen = "<reasoning>";
inline constexpr std::string_view kOracleReasoningClose = "</reasoning>";
inline constexpr std::string_view kEntailmentOpen = "<entailment>";
inline constexpr std::string_view kEntailmentClose = "</entailment>";

inline constexpr std::array<std::string_view, 8> kVerifierThink = {
    kDocumentOpen, kDocumentClose, kClaimOpen, kClaimClose,
    kReasoningOpen, kReasoningClose, kSolutionOpen, kSolutionClose};
inline constexpr std::array<std::string_view, 6> kVerifierNoThink = {
    kDocumentOpen, kDocumentClose, kClaimOpen, kClaimClose, kSolutionOpen, kSolutionClose};
inline constexpr std::array<std::string_view, 4> kOracle = {
    kOracleReasoningOpen, kOracleReasoningClose, kEntailmentOpen, kEntailmentClose};
}  // namespace tags

struct RenderedPrompt {
  PromptKind kind = PromptKind::kSftThink;
  std::string text;
  // Tag at which generation should halt.
  std::optional<std::string> stop_marker;
  // Opening tag the prompt ends with; the model's completion continues it.
  std::string continuation_prefix;
};

namespace detail {

using Bindings = std::span<const std::pair<std::string_view, std::string_view>>;

// Single pass, so substituted content is never re-expanded. With stop_at set,
// output ends right before that placeholder.
inline std::string fill(std::string_view tmpl, Bindings bindings,
                        std::optional<std::string_view> stop_at = std::nullopt) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i);
      if (close != std::string_view::npos) {
        const auto name = tmpl.substr(i + 1, close - i - 1);
        if (stop_at && name == *stop_at) return out;
        bool bound = false;
        for (const auto& [key, value] : bindings) {
          if (key == name) {
            out.append(value);
            bound = true;
            break;
          }
        }
        if (bound) {
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

template <std::size_t N>
void reject_collisions(std::string_view field, std::string_view content,
                       const std::array<std::string_view, N>& delimiters) {
  for (auto tag : delimiters) {
    if (content.find(tag) != std::string_view::npos) {
      throw Error(ErrorCode::kTagCollision,
                  std::string(field) + " contains delimiter " + std::string(tag));
    }
  }
}


}  // namespace detail

inline RenderedPrompt render_oracle_prompt(const GroundedPair& pair) {
  require_content(pair);
  detail::reject_collisions("document", pair.document, tags::kOracle);
  detail::reject_collisions("claim", pair.claim, tags::kOracle);
  const std::pair<std::string_view, std::string_view> b[] = {
      {"document", pair.document}, {"claim", pair.claim}};
  return RenderedPrompt{PromptKind::kOracleThink, detail::fill(templates::kOracleThink, b),
                        std::string(tags::kEntailmentClose), ""};
}

inline RenderedPrompt render_verifier_prompt(const GroundedPair& pair, bool with_reasoning) {
  require_content(pair);
  if (with_reasoning) {
    detail::reject_collisions("document", pair.document, tags::kVerifierThink);
    detail::reject_collisions("claim", pair.claim, tags::kVerifierThink);
  } else {
    detail::reject_collisions("document", pair.document, tags::kVerifierNoThink);
    detail::reject_collisions("claim", pair.claim, tags::kVerifierNoThink);
  }
  const std::pair<std::string_view, std::string_view> b[] = {
      {"document", pair.document}, {"claim", pair.claim}};
  RenderedPrompt out;
  out.stop_marker = std::string(tags::kSolutionClose);
  if (with_reasoning) {
    out.kind = PromptKind::kSftThink;
    out.text = detail::fill(templates::kSftThink, b, "reasoning");
    out.continuation_prefix = std::string(tags::kReasoningOpen) + "\n";
  } else {
    out.kind = PromptKind::kSftNoThink;
    out.text = detail::fill(templates::kSftNoThink, b, "solution");
    out.continuation_prefix = std::string(tags::kSolutionOpen) + "\n";
  }
  return out;
}

// The supervised completion: everything from the first model-generated tag
// through </SOLUTION>.
inline std::string render_training_target(const ReasoningExample& ex, bool with_reasoning) {
  validate(ex);
  if (with_reasoning) detail::reject_collisions("reasoning", ex.reasoning, tags::kVerifierThink);
  std::string out;
  if (with_reasoning) {
    out.append(tags::kReasoningOpen).append("\n");
    out.append(text::trim(ex.reasoning)).append("\n");
    out.append(tags::kReasoningClose).append("\n");
  }
  out.append(tags::kSolutionOpen).append("\n");
  out.append(render(ex.verdict)).append("\n");
  out.append(tags::kSolutionClose);
  return out;
}

// Full supervised text: the inference prompt followed by the target.
inline std::string render_training_example(const ReasoningExample& ex, bool with_reasoning) {
  const auto target = render_training_target(ex, with_reasoning);
  auto prompt = render_verifier_prompt(ex.pair, with_reasoning);
  // The prompt already ends with the opening tag of the first generated span.
  return prompt.text + target.substr(prompt.continuation_prefix.size());
}

inline RenderedPrompt render_gsmclaims_prompt(std::string_view problem, std::string_view solution) {
  if (text::is_blank(problem)) throw Error(ErrorCode::kEmptyField, "problem");
  if (text::is_blank(solution)) throw Error(ErrorCode::kEmptyField, "solution");
  const std::pair<std::string_view, std::string_view> b[] = {
      {"problem", problem}, {"solution", solution}};
  return RenderedPrompt{PromptKind::kGsmClaims, detail::fill(templates::kGsmClaims, b),
                        std::nullopt, ""};
}

// Rebuilds the full tagged output from a completion that continued the
// prompt's trailing opening tag. Completions that restate the tag are kept.
inline std::string reassemble_completion(const RenderedPrompt& prompt, std::string_view completion) {
  if (prompt.continuation_prefix.empty()) return std::string(completion);
  const auto open = text::trim(prompt.continuation_prefix);
  if (text::trim(completion).substr(0, open.size()) == open) return std::string(completion);
  return prompt.continuation_prefix + std::string(completion);
}

}  // namespace claimcheck
