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

// Reasoning-length decile analysis and error-tag aggregation.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "claimcheck/core.hpp"
#include "claimcheck/metrics.hpp"
#include "claimcheck/records.hpp"
#include "claimcheck/tokenizer.hpp"

namespace claimcheck {

inline constexpr std::size_t kDeciles = 10;

struct DecileBucket {
  std::size_t index = 0;
  std::size_t min_len = 0;
  std::size_t max_len = 0;
  std::size_t size = 0;
  ConfusionCounts counts;
  // Undefined when the bucket lacks a class (bacc) or has no positive
  // predictions / positives (precision / recall).
  std::optional<double> bacc;
  std::optional<double> precision;
  std::optional<double> recall;
  std::vector<std::string> ids;
};

struct DecileReport {
  std::vector<DecileBucket> buckets;
  // Records without a reasoning span, left out of the buckets.
  std::size_t excluded = 0;
  std::string tokenizer;
};

// Sizes of `parts` contiguous groups over n items; the first n % parts
// groups get one extra item.
inline std::vector<std::size_t> equal_partition_sizes(std::size_t n, std::size_t parts) {
  std::vector<std::size_t> sizes(parts, n / parts);
  for (std::size_t k = 0; k < n % parts; ++k) ++sizes[k];
  return sizes;
}

inline DecileReport length_decile_analysis(std::span<const EvalRecord> records, const Tokenizer& tokenizer) {
  struct Scored {
    std::size_t len;
    const EvalRecord* rec;
  };
  DecileReport out;
  out.tokenizer = tokenizer.name();
  std::vector<Scored> scored;
  scored.reserve(records.size());
  for (const auto& r : records) {
    if (!r.reasoning) {
      ++out.excluded;
      continue;
    }
    scored.push_back({tokenizer.count(*r.reasoning), &r});
  }
  if (scored.size() < kDeciles) {
    throw Error(ErrorCode::kTooFewRecords, std::to_string(scored.size()) +
                                               " records with reasoning, need at least 10");
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& x, const Scored& y) {
    return std::tie(x.len, x.rec->id) < std::tie(y.len, y.rec->id);
  });

  const auto sizes = equal_partition_sizes(scored.size(), kDeciles);
  std::size_t pos = 0;
  for (std::size_t k = 0; k < kDeciles; ++k) {
    DecileBucket b;
    b.index = k;
    b.size = sizes[k];
    b.min_len = scored[pos].len;
    b.max_len = scored[pos + sizes[k] - 1].len;
    for (std::size_t i = pos; i < pos + sizes[k]; ++i) {
      b.counts.add(scored[i].rec->gold, scored[i].rec->predicted);
      b.ids.push_back(scored[i].rec->id);
    }
    pos += sizes[k];
    const auto& c = b.counts;
    if (c.positives() > 0 && c.negatives() > 0) b.bacc = balanced_accuracy(c);
    if (c.tp + c.fp > 0) b.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    if (c.tp + c.fn > 0) b.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    out.buckets.push_back(std::move(b));
  }
  return out;
}

struct TagShare {
  ErrorTag tag = ErrorTag::kOther;
  std::size_t count = 0;
  double share_of_errors = 0.0;
  double share_of_all = 0.0;
};

struct ErrorReport {
  std::size_t records = 0;
  std::size_t errors = 0;
  std::size_t tagged = 0;
  // Records carrying two or more distinct tags.
  std::size_t overlap = 0;
  std::vector<TagShare> tags;  // one entry per ErrorTag, in enum order
};

// A record counts once per distinct tag it carries.
inline ErrorReport error_report(std::span<const EvalRecord> records) {
  ErrorReport out;
  out.records = records.size();
  std::array<std::size_t, kAllErrorTags.size()> counts{};
  for (const auto& r : records) {
    if (!r.correct()) ++out.errors;
    std::array<bool, kAllErrorTags.size()> seen{};
    std::size_t distinct = 0;
    for (auto tag : r.tags) {
      auto& s = seen[static_cast<std::size_t>(tag)];
      if (!s) {
        s = true;
        ++distinct;
        ++counts[static_cast<std::size_t>(tag)];
      }
    }
    if (distinct > 0) ++out.tagged;
    if (distinct > 1) ++out.overlap;
  }
  for (auto tag : kAllErrorTags) {
    TagShare s;
    s.tag = tag;
    s.count = counts[static_cast<std::size_t>(tag)];
    if (out.errors > 0) s.share_of_errors = static_cast<double>(s.count) / static_cast<double>(out.errors);
    if (out.records > 0) s.share_of_all = static_cast<double>(s.count) / static_cast<double>(out.records);
    out.tags.push_back(s);
  }
  return out;
}

}  // namespace claimcheck
