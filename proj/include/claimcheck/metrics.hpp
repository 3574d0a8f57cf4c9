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

// Confusion tallies, balanced accuracy, accuracy and the paired bootstrap.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "claimcheck/core.hpp"
#include "claimcheck/records.hpp"
#include "claimcheck/rng.hpp"

namespace claimcheck {

enum class Metric { kBalancedAccuracy, kAccuracy };

inline std::string_view to_string(Metric m) {
  return m == Metric::kBalancedAccuracy ? "bacc" : "acc";
}

inline Metric parse_metric(std::string_view name) {
  const auto upper = text::to_upper(name);
  if (upper == "BACC") return Metric::kBalancedAccuracy;
  if (upper == "ACC") return Metric::kAccuracy;
  throw Error(ErrorCode::kConfig, "unknown metric '" + std::string(name) + "'");
}

// SUPPORTED is the positive class; missing predictions count as wrong.
inline ConfusionCounts confusion(std::span<const EvalRecord> records) {
  ConfusionCounts c;
  for (const auto& r : records) c.add(r.gold, r.predicted);
  return c;
}

inline double balanced_accuracy(const ConfusionCounts& c) {
  if (c.positives() == 0) throw Error(ErrorCode::kClassAbsent, "no SUPPORTED gold instances");
  if (c.negatives() == 0) throw Error(ErrorCode::kClassAbsent, "no NOT_SUPPORTED gold instances");
  const double tpr = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  const double tnr = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
  return 0.5 * (tpr + tnr);
}

inline double accuracy(const ConfusionCounts& c) {
  if (c.total() == 0) throw Error(ErrorCode::kEmptySet, "no records to score");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

inline double metric_value(const ConfusionCounts& c, Metric m) {
  return m == Metric::kBalancedAccuracy ? balanced_accuracy(c) : accuracy(c);
}

struct BootstrapOptions {
  std::size_t resamples = 10000;
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  // Give up when class-losing redraws exceed this multiple of `resamples`.
  std::size_t max_redraw_factor = 100;
};

struct BootstrapResult {
  Metric metric = Metric::kBalancedAccuracy;
  double metric_a = 0.0;
  double metric_b = 0.0;
  // metric(a) - metric(b) on the full paired set.
  double delta_observed = 0.0;
  // Two-sided: 2 * share of resampled deltas on the far side of (or at) zero,
  // clamped to 1.
  double p_value = 1.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double ci_level = 0.95;
  std::size_t resamples = 0;
  std::uint64_t seed = 0;
  // Resamples drawn again because they lost a gold class.
  std::size_t redraws = 0;
  std::size_t n = 0;

  friend bool operator==(const BootstrapResult&, const BootstrapResult&) = default;
};

namespace detail {

// Linear-interpolated quantile of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

// Item code: bit0 gold is SUPPORTED, bit1 a correct, bit2 b correct.
struct CodeHistogram {
  std::array<std::size_t, 8> n{};

  ConfusionCounts counts(int system_bit) const {
    ConfusionCounts c;
    for (unsigned code = 0; code < 8; ++code) {
      const bool pos = (code & 1u) != 0;
      const bool right = (code & (1u << system_bit)) != 0;
      if (pos) {
        (right ? c.tp : c.fn) += n[code];
      } else {
        (right ? c.tn : c.fp) += n[code];
      }
    }
    return c;
  }

  bool has_both_classes() const {
    std::size_t pos = 0;
    std::size_t neg = 0;
    for (unsigned code = 0; code < 8; ++code) ((code & 1u) ? pos : neg) += n[code];
    return pos > 0 && neg > 0;
  }
};

}  // namespace detail

// Resamples instance ids with replacement, scoring both systems on the same
// draw each time.
inline BootstrapResult paired_bootstrap(std::span<const EvalRecord> a, std::span<const EvalRecord> b,
                                        Metric metric, const BootstrapOptions& options = {}) {
  if (options.resamples < 1) throw Error(ErrorCode::kInvalidParams, "resamples must be >= 1");
  if (!(options.ci_level > 0.0 && options.ci_level < 1.0)) {
    throw Error(ErrorCode::kInvalidParams, "ci_level must be in (0, 1)");
  }
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kUnpairedRecords, std::to_string(a.size()) + " vs " +
                                                 std::to_string(b.size()) + " records");
  }
  std::unordered_map<std::string_view, std::size_t> index_b;
  index_b.reserve(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!index_b.emplace(b[i].id, i).second) {
      throw Error(ErrorCode::kUnpairedRecords, "duplicate id '" + b[i].id + "' in b");
    }
  }
  std::vector<std::uint8_t> codes(a.size());
  {
    std::unordered_map<std::string_view, bool> seen;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!seen.emplace(a[i].id, true).second) {
        throw Error(ErrorCode::kUnpairedRecords, "duplicate id '" + a[i].id + "' in a");
      }
      auto it = index_b.find(a[i].id);
      if (it == index_b.end()) throw Error(ErrorCode::kUnpairedRecords, "id '" + a[i].id + "' missing from b");
      const auto& rb = b[it->second];
      if (rb.gold != a[i].gold) throw Error(ErrorCode::kUnpairedRecords, "gold differs for '" + a[i].id + "'");
      codes[i] = static_cast<std::uint8_t>((a[i].gold == Verdict::kSupported ? 1u : 0u) |
                                           (a[i].correct() ? 2u : 0u) | (rb.correct() ? 4u : 0u));
    }
  }

  BootstrapResult out;
  out.metric = metric;
  out.resamples = options.resamples;
  out.seed = options.seed;
  out.ci_level = options.ci_level;
  out.n = codes.size();

  detail::CodeHistogram full;
  for (auto c : codes) ++full.n[c];
  out.metric_a = metric_value(full.counts(1), metric);
  out.metric_b = metric_value(full.counts(2), metric);
  out.delta_observed = out.metric_a - out.metric_b;

  auto rng = make_rng(options.seed, 0xB0075u);
  const std::size_t max_redraws = options.max_redraw_factor * options.resamples;
  std::vector<double> deltas;
  deltas.reserve(options.resamples);
  while (deltas.size() < options.resamples) {
    detail::CodeHistogram h;
    for (std::size_t k = 0; k < codes.size(); ++k) ++h.n[codes[uniform_below(rng, codes.size())]];
    if (metric == Metric::kBalancedAccuracy && !h.has_both_classes()) {
      if (++out.redraws > max_redraws) {
        throw Error(ErrorCode::kClassAbsent, "too many resamples lost a gold class");
      }
      continue;
    }
    deltas.push_back(metric_value(h.counts(1), metric) - metric_value(h.counts(2), metric));
  }

  std::size_t against = 0;
  for (double d : deltas) {
    const bool counts = out.delta_observed > 0.0   ? d <= 0.0
                        : out.delta_observed < 0.0 ? d >= 0.0
                                                   : true;
    if (counts) ++against;
  }
  out.p_value = std::min(1.0, 2.0 * static_cast<double>(against) / static_cast<double>(deltas.size()));

  std::sort(deltas.begin(), deltas.end());
  const double tail = (1.0 - options.ci_level) / 2.0;
  out.ci_low = detail::quantile_sorted(deltas, tail);
  out.ci_high = detail::quantile_sorted(deltas, 1.0 - tail);
  return out;
}

}  // namespace claimcheck
