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

// Two-term completion reward for preference optimization:
//   total = format_weight * R_fmt + accuracy_weight * R_acc
// R_fmt is +1 for a well-ordered reasoning+solution completion and -1
// otherwise. R_acc is +/- scale * w, with w the weight of the gold class.
// Unparseable verdicts score as incorrect.

#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "claimcheck/core.hpp"
#include "claimcheck/parsing.hpp"

namespace claimcheck {

struct RewardConfig {
  double format_weight = 0.5;
  double accuracy_weight = 1.0;
  double w_yes = 0.6356;
  double w_no = 2.3435;
  double scale = 4.0;

  void validate() const {
    for (double w : {format_weight, accuracy_weight, w_yes, w_no, scale}) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw Error(ErrorCode::kInvalidParams, "reward weights must be positive and finite");
      }
    }
  }

  double class_weight(Verdict gold) const { return gold == Verdict::kSupported ? w_yes : w_no; }

  // Largest |total| reachable for this gold class.
  double bound(Verdict gold) const {
    return format_weight + accuracy_weight * scale * class_weight(gold);
  }
};

struct RewardBreakdown {
  // Weighted terms; divide by the config weights for the raw values.
  double format_term = 0.0;
  double accuracy_term = 0.0;
  double total = 0.0;
  ParsedOutput parsed;
};

inline double format_reward(std::string_view raw) { return format_adherent(raw) ? 1.0 : -1.0; }

inline double accuracy_reward(const ParsedOutput& parsed, Verdict gold, const RewardConfig& cfg = {}) {
  const double magnitude = cfg.scale * cfg.class_weight(gold);
  return parsed.verdict == gold ? magnitude : -magnitude;
}

inline double accuracy_reward(std::string_view raw, Verdict gold, const RewardConfig& cfg = {}) {
  return accuracy_reward(parse_verifier_output(raw), gold, cfg);
}

inline RewardBreakdown total_reward(std::string_view raw, Verdict gold, const RewardConfig& cfg = {}) {
  cfg.validate();
  RewardBreakdown out;
  out.parsed = parse_verifier_output(raw);
  out.format_term = cfg.format_weight * (out.parsed.format_ok ? 1.0 : -1.0);
  out.accuracy_term = cfg.accuracy_weight * accuracy_reward(out.parsed, gold, cfg);
  out.total = out.format_term + out.accuracy_term;
  return out;
}

struct GroupRewards {
  std::vector<RewardBreakdown> items;
  double mean = 0.0;
  double stddev = 0.0;  // population
};

// Scores the sampled completions for one prompt.
inline GroupRewards score_group(std::span<const std::string> completions, Verdict gold,
                                const RewardConfig& cfg = {}) {
  GroupRewards out;
  out.items.reserve(completions.size());
  for (const auto& c : completions) out.items.push_back(total_reward(c, gold, cfg));
  if (out.items.empty()) return out;
  double sum = 0.0;
  for (const auto& r : out.items) sum += r.total;
  out.mean = sum / static_cast<double>(out.items.size());
  double ss = 0.0;
  for (const auto& r : out.items) ss += (r.total - out.mean) * (r.total - out.mean);
  out.stddev = std::sqrt(ss / static_cast<double>(out.items.size()));
  return out;
}

}  // namespace claimcheck
