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

// Reasoning-augmented dataset construction: annotate gold-labelled pairs with
// an oracle, keep only annotations that agree with gold, split off a dev set
// and export supervised training text.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "claimcheck/client.hpp"
#include "claimcheck/core.hpp"
#include "claimcheck/io.hpp"
#include "claimcheck/parsing.hpp"
#include "claimcheck/prompts.hpp"
#include "claimcheck/rng.hpp"

namespace claimcheck {

enum class AnnotationStatus { kKept, kDroppedDisagree, kDroppedMalformed, kDroppedBackend };

inline std::string_view to_string(AnnotationStatus s) {
  switch (s) {
    case AnnotationStatus::kKept: return "KEPT";
    case AnnotationStatus::kDroppedDisagree: return "DROPPED_DISAGREE";
    case AnnotationStatus::kDroppedMalformed: return "DROPPED_MALFORMED";
    case AnnotationStatus::kDroppedBackend: return "DROPPED_BACKEND";
  }
  return "UNKNOWN";
}

struct AnnotationOutcome {
  GroundedPair pair;
  ParsedOutput parsed;
  AnnotationStatus status = AnnotationStatus::kDroppedBackend;
  std::string detail;  // error text for drops that have one
};

struct BuildStats {
  std::size_t input_count = 0;
  std::size_t kept = 0;
  std::size_t dropped_disagree = 0;
  std::size_t dropped_malformed = 0;
  std::size_t dropped_backend = 0;
  // kept / input_count, 0 for empty input.
  double retention_rate = 0.0;
};

struct AnnotateOptions {
  DecodingParams params;
  std::size_t parallelism = 4;
};

// Classifies one oracle reply against gold. Empty reasoning counts as
// malformed since it cannot become a training example.
inline AnnotationStatus classify_annotation(const ParsedOutput& parsed, Verdict gold) {
  if (!parsed.format_ok || !parsed.reasoning || parsed.reasoning->empty()) {
    return AnnotationStatus::kDroppedMalformed;
  }
  return parsed.verdict == gold ? AnnotationStatus::kKept : AnnotationStatus::kDroppedDisagree;
}

// One outcome per pair, in input order. Only transport failures are retried
// (inside the client); content failures are final.
inline std::vector<AnnotationOutcome> annotate(std::span<const GroundedPair> pairs, Client& client,
                                               const AnnotateOptions& options = {}) {
  std::vector<AnnotationOutcome> out(pairs.size());
  std::vector<CompletionRequest> requests;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!pairs[i].gold) throw Error(ErrorCode::kInvalidInput, "pair '" + pairs[i].id + "' has no gold label");
    out[i].pair = pairs[i];
    try {
      auto prompt = render_oracle_prompt(pairs[i]);
      requests.push_back({pairs[i].id, std::move(prompt.text), options.params, prompt.stop_marker});
      owner.push_back(i);
    } catch (const Error& e) {
      out[i].status = AnnotationStatus::kDroppedMalformed;
      out[i].detail = e.what();
    }
  }
  const auto replies = client.complete_batch(requests, options.parallelism);
  for (std::size_t k = 0; k < replies.size(); ++k) {
    auto& o = out[owner[k]];
    if (!replies[k].ok()) {
      o.status = AnnotationStatus::kDroppedBackend;
      o.detail = replies[k].error->what();
      continue;
    }
    o.parsed = parse_oracle_output(replies[k].result->text);
    o.status = classify_annotation(o.parsed, *o.pair.gold);
  }
  return out;
}

struct FilterResult {
  std::vector<ReasoningExample> examples;
  BuildStats stats;
};

inline FilterResult agreement_filter(std::span<const AnnotationOutcome> outcomes) {
  FilterResult out;
  out.stats.input_count = outcomes.size();
  for (const auto& o : outcomes) {
    switch (o.status) {
      case AnnotationStatus::kKept:
        ++out.stats.kept;
        out.examples.push_back(ReasoningExample{o.pair, *o.parsed.reasoning, *o.pair.gold});
        break;
      case AnnotationStatus::kDroppedDisagree: ++out.stats.dropped_disagree; break;
      case AnnotationStatus::kDroppedMalformed: ++out.stats.dropped_malformed; break;
      case AnnotationStatus::kDroppedBackend: ++out.stats.dropped_backend; break;
    }
  }
  if (out.stats.input_count > 0) {
    out.stats.retention_rate =
        static_cast<double>(out.stats.kept) / static_cast<double>(out.stats.input_count);
  }
  return out;
}

struct DevSplit {
  std::vector<ReasoningExample> train;
  std::vector<ReasoningExample> dev;
};

// Seeded shuffle, then the first round(fraction * N) examples become dev.
inline DevSplit split_dev(std::span<const ReasoningExample> examples, double fraction = 0.2,
                          std::uint64_t seed = 0) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidFraction, "dev fraction must be in (0, 1), got " + std::to_string(fraction));
  }
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = make_rng(seed, 0xDE5u);
  seeded_shuffle(std::span<std::size_t>(order), rng);
  const auto dev_size =
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(examples.size())));
  DevSplit out;
  out.dev.reserve(dev_size);
  out.train.reserve(examples.size() - dev_size);
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < dev_size ? out.dev : out.train).push_back(examples[order[k]]);
  }
  return out;
}

// LoRA SFT settings for the external trainer, carried in export manifests.
inline nlohmann::json sft_hyperparameters() {
  return nlohmann::json{
      {"method", "lora"},
      {"lora_rank", 64},
      {"lora_alpha", 64},
      {"learning_rate", 2e-4},
      {"lr_scheduler", "linear"},
      {"target_modules", {"q_proj", "k_proj", "v_proj", "o_proj", "gate_proj", "up_proj", "down_proj"}},
      {"epochs", 1},
      {"warmup_steps", 5},
      {"per_device_batch_size", 4},
      {"gradient_accumulation_steps", 4},
      {"optimizer", "adamw_8bit"},
      {"weight_decay", 0.01},
      {"load_in_4bit", true},
      {"base_model", "gemma-3-1b"},
  };
}

inline nlohmann::json decoding_json(const DecodingParams& p) {
  return nlohmann::json{{"temperature", p.temperature},
                        {"top_p", p.top_p},
                        {"top_k", p.top_k},
                        {"max_new_tokens", p.max_new_tokens}};
}

inline nlohmann::json build_stats_json(const BuildStats& s) {
  return nlohmann::json{{"input_count", s.input_count},
                        {"kept", s.kept},
                        {"dropped_disagree", s.dropped_disagree},
                        {"dropped_malformed", s.dropped_malformed},
                        {"dropped_backend", s.dropped_backend},
                        {"retention_rate", s.retention_rate}};
}

struct ExportOptions {
  bool with_reasoning = true;
  std::uint64_t seed = 0;
  DecodingParams decoding;
  // Also write <path>.manifest.json next to the data.
  bool write_sidecar_manifest = true;
};

// One JSON line per example: {id, label, prompt, completion, text}, where
// text = prompt + completion. Returns the export manifest.
inline nlohmann::json export_training_file(std::span<const ReasoningExample> examples,
                                           const std::filesystem::path& path,
                                           const ExportOptions& options = {}) {
  io::AtomicFile file(path);
  std::size_t supported = 0;
  for (const auto& ex : examples) {
    const auto prompt = render_verifier_prompt(ex.pair, options.with_reasoning);
    const auto target = render_training_target(ex, options.with_reasoning);
    const auto completion = target.substr(prompt.continuation_prefix.size());
    file.write_line(nlohmann::json{{"id", ex.pair.id},
                                   {"label", to_bit(ex.verdict)},
                                   {"prompt", prompt.text},
                                   {"completion", completion},
                                   {"text", prompt.text + completion}});
    if (ex.verdict == Verdict::kSupported) ++supported;
  }
  file.commit();

  const auto kind = options.with_reasoning ? PromptKind::kSftThink : PromptKind::kSftNoThink;
  nlohmann::json manifest{
      {"file", path.filename().string()},
      {"records", examples.size()},
      {"supported", supported},
      {"not_supported", examples.size() - supported},
      {"with_reasoning", options.with_reasoning},
      {"seed", options.seed},
      {"template", {{"kind", to_string(kind)},
                    {"version", templates::kTemplateVersion},
                    {"sha256", sha256_hex(template_text(kind))}}},
      {"template_checksums", template_checksums()},
      {"decoding", decoding_json(options.decoding)},
      {"sft_hyperparameters", sft_hyperparameters()},
  };
  if (options.write_sidecar_manifest) {
    io::write_text_file(path.string() + ".manifest.json", io::dump_pretty(manifest) + "\n");
  }
  return manifest;
}

}  // namespace claimcheck
