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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "test_support.hpp"

namespace cc = claimcheck;
using nlohmann::json;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream why;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

cc::ClientConfig quiet_client() {
  cc::ClientConfig c;
  c.retry.initial_backoff = std::chrono::milliseconds(0);
  c.sleeper = [](std::chrono::milliseconds) {};
  return c;
}

// 1. Balanced accuracy against an independently coded per-class recall mean.
void criterion_1(Check& c) {
  std::mt19937_64 gen(2024);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t pos = 1 + gen() % 5000;
    const std::uint64_t neg = 1 + gen() % 5000;
    const std::uint64_t tp = gen() % (pos + 1);
    const std::uint64_t tn = gen() % (neg + 1);
    const cc::ConfusionCounts counts{tp, neg - tn, tn, pos - tp};
    const long double recall_pos = static_cast<long double>(tp) / static_cast<long double>(pos);
    const long double recall_neg = static_cast<long double>(tn) / static_cast<long double>(neg);
    const double oracle = static_cast<double>((recall_pos + recall_neg) / 2.0L);
    worst = std::max(worst, std::fabs(cc::balanced_accuracy(counts) - oracle));
  }
  c.expect(worst <= 1e-12, "max deviation " + std::to_string(worst));
  c.expect(cc::balanced_accuracy(cc::ConfusionCounts{3, 2, 2, 1}) == 0.625, "worked example != 0.625");
  c.why << "max |bacc - oracle| = " << worst;
}

// 2. Reward corners and range bound.
void criterion_2(Check& c) {
  const std::string good_yes = "<REASONING>\nfacts match\n</REASONING>\n<SOLUTION>\nYES\n</SOLUTION>";
  const std::string good_no = "<REASONING>\nnot stated\n</REASONING>\n<SOLUTION>\nNO\n</SOLUTION>";
  const struct {
    std::string completion;
    cc::Verdict gold;
    double want;
  } corners[] = {
      {good_yes, cc::Verdict::kSupported, 3.0424},
      {"<SOLUTION>YES</SOLUTION>", cc::Verdict::kNotSupported, -9.874},
      {"<SOLUTION>NO</SOLUTION>", cc::Verdict::kNotSupported, 8.874},
      {good_no, cc::Verdict::kSupported, -2.0424},
  };
  for (const auto& k : corners) {
    const double got = cc::total_reward(k.completion, k.gold).total;
    c.expect(std::fabs(got - k.want) <= 1e-9, "corner " + std::to_string(k.want) + " got " + std::to_string(got) + "; ");
  }
  const std::vector<std::string> pieces = {"<REASONING>", "</REASONING>", "<SOLUTION>", "</SOLUTION>", "YES", "NO",
                                           "no", "Yes!", "\n", " ", "because", "<", "/"};
  std::mt19937_64 gen(77);
  const double bound = 0.5 + 4.0 * 2.3435;
  double peak = 0.0;
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    const auto len = gen() % 14;
    for (std::size_t k = 0; k < len; ++k) s += pieces[gen() % pieces.size()];
    const auto gold = cc::from_bit(static_cast<int>(gen() % 2));
    peak = std::max(peak, std::fabs(cc::total_reward(s, gold).total));
  }
  c.expect(peak <= bound + 1e-12, "range bound exceeded");
  c.why << "corners ok, max |R| over 10000 = " << peak << " <= " << bound;
}

// 3. Parser totality and render -> parse round trip.
void criterion_3(Check& c) {
  std::mt19937_64 gen(31337);
  const std::vector<std::string> pieces = {"<REASONING>", "</REASONING>", "<SOLUTION>", "</SOLUTION>",
                                           "<reasoning>", "</reasoning>", "<entailment>", "</entailment>",
                                           "YES", "NO", " ", "\n"};
  std::size_t crashes = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    const auto len = gen() % 40;
    for (std::size_t k = 0; k < len; ++k) {
      if (gen() % 3 == 0) {
        s += pieces[gen() % pieces.size()];
      } else {
        s.push_back(static_cast<char>(gen() % 256));
      }
    }
    try {
      const auto v = cc::parse_verifier_output(s);
      const auto o = cc::parse_oracle_output(s);
      const auto n = cc::parse_nothink_output(s);
      if ((v.format_ok && !v.verdict) || (o.format_ok && !o.verdict) || (n.format_ok && !n.verdict)) ++crashes;
    } catch (...) {
      ++crashes;
    }
  }
  c.expect(crashes == 0, std::to_string(crashes) + " parser failures; ");

  const std::vector<std::string> words = {"the", "river", "flows", "north", "1987", "not", "only", "42%", "\"q\"", "é"};
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    auto phrase = [&](std::size_t n) {
      std::string s;
      for (std::size_t k = 0; k < n; ++k) {
        if (k) s += gen() % 5 == 0 ? "\n" : " ";
        s += words[gen() % words.size()];
      }
      return s;
    };
    const cc::ReasoningExample ex{
        {"ex" + std::to_string(i), phrase(3 + gen() % 10), phrase(10 + gen() % 30), std::nullopt, ""},
        phrase(1 + gen() % 40), cc::from_bit(static_cast<int>(gen() % 2))};
    auto pair = ex.pair;
    pair.gold = ex.verdict;
    const cc::ReasoningExample full{pair, ex.reasoning, ex.verdict};
    const auto prompt = cc::render_verifier_prompt(pair, true);
    const auto text = cc::render_training_example(full, true);
    const auto parsed = cc::parse_verifier_output(
        cc::reassemble_completion(prompt, std::string_view(text).substr(prompt.text.size())));
    if (!parsed.format_ok || parsed.reasoning != ex.reasoning || parsed.verdict != ex.verdict) ++mismatches;
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " round-trip mismatches");
  c.why << "10000 fuzz inputs, 1000 round trips";
}

// 4. Agreement filter conservation and retention near 79%.
void criterion_4(Check& c) {
  const auto pairs = cc::testing::synthetic_pairs(1000);
  double lo = 1.0;
  double hi = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto mock = std::make_shared<cc::MockBackend>();
    cc::plant_oracle(*mock, pairs, cc::OraclePersona{0.21, 0.0, cc::PlantMode::kBernoulli, seed});
    cc::Client client(mock, quiet_client());
    const auto outcomes = cc::annotate(pairs, client);
    const auto f = cc::agreement_filter(outcomes);
    const auto& s = f.stats;
    c.expect(s.kept + s.dropped_disagree + s.dropped_malformed + s.dropped_backend == 1000, "conservation; ");
    lo = std::min(lo, s.retention_rate);
    hi = std::max(hi, s.retention_rate);

    const auto dir = cc::testing::fresh_dir("acc4");
    cc::export_training_file(f.examples, dir / "sft.jsonl", cc::ExportOptions{true, seed, {}, false});
    std::map<std::string, int> gold;
    for (const auto& p : pairs) gold[p.id] = cc::to_bit(*p.gold);
    cc::io::for_each_record(dir / "sft.jsonl", [&](const json& j, std::size_t) {
      c.expect(j["label"].get<int>() == gold[j["id"].get<std::string>()], "exported verdict != gold; ");
      const auto parsed = cc::parse_verifier_output(j["completion"].get<std::string>().insert(0, "<REASONING>\n"));
      c.expect(parsed.verdict && cc::to_bit(*parsed.verdict) == gold[j["id"].get<std::string>()],
               "exported text verdict != gold; ");
    });
  }
  c.expect(std::fabs(lo - 0.79) <= 0.03 && std::fabs(hi - 0.79) <= 0.03, "retention outside 79% +/- 3pp");
  char buf[96];
  std::snprintf(buf, sizeof buf, "retention over 10 seeds in [%.3f, %.3f]", lo, hi);
  c.why << buf;
}

// 5. GSMClaims balance under planted failures; 1317 -> 2634.
void criterion_5(Check& c) {
  const auto problems = cc::testing::synthetic_problems(1317);
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 5; ++trial) {
    cc::GsmPersona persona;
    persona.seed = static_cast<std::uint64_t>(trial);
    if (trial > 0) {
      for (const auto& p : problems) {
        const auto r = gen() % 100;
        if (r < 7) persona.invalid_ids.insert(p.id);
        else if (r < 12) persona.prose_ids.insert(p.id);
      }
    }
    auto mock = std::make_shared<cc::MockBackend>();
    cc::plant_gsm(*mock, problems, persona);
    for (std::size_t i = 0; trial > 0 && i < problems.size(); i += 97) {
      mock->fail_permanently(cc::gsmclaims_request(problems[i], {}).prompt);
    }
    auto cfg = quiet_client();
    cfg.retry.max_attempts = 2;
    cc::Client client(mock, cfg);
    const auto res = cc::build_gsmclaims(problems, client, cc::GsmBuildOptions{{}, 4, persona.seed, true});
    std::size_t yes = 0;
    for (const auto& p : res.dataset) yes += p.gold == cc::Verdict::kSupported ? 1 : 0;
    c.expect(2 * yes == res.dataset.size(), "unbalanced dataset; ");
    c.expect(res.dataset.size() == 2 * (1317 - res.failures.size()), "instances != 2 * survivors; ");
    if (trial == 0) {
      c.expect(res.dataset.size() == 2634, "clean run gave " + std::to_string(res.dataset.size()));
    } else {
      c.expect(!res.failures.empty(), "no planted failure surfaced; ");
    }
  }
  c.why << "5 runs balanced, clean 1317-problem run gives 2634 instances";
}

std::vector<cc::EvalRecord> planted_system(std::size_t per_class, std::size_t wrong, std::mt19937_64& gen) {
  std::vector<cc::EvalRecord> out;
  for (auto gold : {cc::Verdict::kSupported, cc::Verdict::kNotSupported}) {
    std::vector<std::size_t> idx(per_class);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), gen);
    std::vector<char> miss(per_class, 0);
    for (std::size_t k = 0; k < wrong; ++k) miss[idx[k]] = 1;
    for (std::size_t i = 0; i < per_class; ++i) {
      cc::EvalRecord r;
      r.id = (gold == cc::Verdict::kSupported ? "s" : "n") + std::to_string(i);
      r.gold = gold;
      r.predicted = miss[i] ? cc::flip(gold) : gold;
      out.push_back(r);
    }
  }
  return out;
}

// 6. Bootstrap power, calibration and determinism.
void criterion_6(Check& c) {
  int significant = 0;
  int identical_ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 gen(1000 + seed);
    // BAcc 0.80 vs 0.70 on 2000 paired records.
    const auto a = planted_system(1000, 200, gen);
    const auto b = planted_system(1000, 300, gen);
    const auto r = cc::paired_bootstrap(a, b, cc::Metric::kBalancedAccuracy, {10000, seed});
    if (r.p_value < 0.05 && std::fabs(r.delta_observed - 0.1) < 1e-12) ++significant;
    const auto same = cc::paired_bootstrap(a, a, cc::Metric::kBalancedAccuracy, {1000, seed});
    if (same.p_value == 1.0) ++identical_ok;
  }
  std::mt19937_64 gen(9);
  const auto a = planted_system(1000, 200, gen);
  const auto b = planted_system(1000, 300, gen);
  const auto r1 = cc::paired_bootstrap(a, b, cc::Metric::kBalancedAccuracy, {10000, 42});
  const auto r2 = cc::paired_bootstrap(a, b, cc::Metric::kBalancedAccuracy, {10000, 42});
  c.expect(significant >= 95, "power " + std::to_string(significant) + "/100; ");
  c.expect(identical_ok == 100, "identical p=1 in " + std::to_string(identical_ok) + "/100; ");
  c.expect(r1 == r2, "not bit-identical; ");
  c.why << "p<0.05 in " << significant << "/100 seeds, identical p=1 in " << identical_ok << "/100";
}

// 7. Decile partition invariants and the planted long-rationale pattern.
void criterion_7(Check& c) {
  std::mt19937_64 gen(71);
  const cc::WhitespaceTokenizer tok;
  auto words = [](std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += "tok ";
    return s;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 10 + gen() % 500;
    std::vector<cc::EvalRecord> rs(n);
    for (std::size_t i = 0; i < n; ++i) {
      rs[i].id = "r" + std::to_string(gen() % 100000) + "-" + std::to_string(i);
      rs[i].gold = cc::from_bit(static_cast<int>(gen() % 2));
      rs[i].predicted = cc::from_bit(static_cast<int>(gen() % 2));
      rs[i].reasoning = words(gen() % 30);
    }
    const auto rep = cc::length_decile_analysis(rs, tok);
    std::set<std::string> seen;
    std::size_t mn = n;
    std::size_t mx = 0;
    for (const auto& b : rep.buckets) {
      mn = std::min(mn, b.size);
      mx = std::max(mx, b.size);
      for (const auto& id : b.ids) seen.insert(id);
    }
    c.expect(rep.buckets.size() == 10 && mx - mn <= 1 && seen.size() == n, "partition broken; ");
  }

  // Wrong on the longest 10%; short rationales over-predict SUPPORTED.
  std::vector<cc::EvalRecord> rs;
  for (std::size_t i = 0; i < 1000; ++i) {
    cc::EvalRecord r;
    r.id = "p" + std::to_string(i);
    r.gold = i % 2 ? cc::Verdict::kSupported : cc::Verdict::kNotSupported;
    r.reasoning = words(20 + i);
    if (i >= 900) {
      r.predicted = cc::flip(r.gold);
    } else if (i < 300 && r.gold == cc::Verdict::kNotSupported && i % 6 == 0) {
      r.predicted = cc::Verdict::kSupported;
    } else {
      r.predicted = r.gold;
    }
    rs.push_back(r);
  }
  const auto rep = cc::length_decile_analysis(rs, tok);
  const double last = rep.buckets[9].bacc.value_or(1.0);
  for (std::size_t k = 0; k < 9; ++k) c.expect(rep.buckets[k].bacc.value_or(0.0) > last, "last decile not lowest; ");
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& b = rep.buckets[k];
    c.expect(b.recall && b.precision && *b.recall > *b.precision, "recall <= precision in low decile; ");
  }
  c.why << "200 random partitions ok, last-decile bacc " << last << ", recall>precision in deciles 1-3";
}

// 8. CLI builds are byte-identical across reruns and parallelism 1 vs 8.
void criterion_8(Check& c) {
  namespace fs = std::filesystem;
  const auto dir = cc::testing::fresh_dir("acc8");
  cc::testing::write_pairs(dir / "pairs.jsonl", cc::testing::synthetic_pairs(200));
  cc::testing::write_problems(dir / "problems.jsonl", cc::testing::synthetic_problems(100));

  auto think = [&](const std::string& out, const std::string& par) {
    return cc::testing::run({"build-think", "--input", (dir / "pairs.jsonl").string(), "--out-dir",
                             (dir / out).string(), "--mock", "--seed", "17", "--mock-disagree-rate", "0.21",
                             "--mock-malformed-rate", "0.05", "--mock-plant", "bernoulli", "--parallelism", par});
  };
  auto gsm = [&](const std::string& out, const std::string& par) {
    return cc::testing::run({"build-gsmclaims", "--input", (dir / "problems.jsonl").string(), "--out-dir",
                             (dir / out).string(), "--mock", "--seed", "17", "--mock-invalid", "gsm-3",
                             "--mock-prose", "gsm-8", "--parallelism", par});
  };
  const auto t1 = think("t1", "1");
  const auto t2 = think("t2", "1");
  const auto t8 = think("t8", "8");
  const auto g1 = gsm("g1", "1");
  const auto g2 = gsm("g2", "1");
  const auto g8 = gsm("g8", "8");
  for (const auto* r : {&t1, &t2, &t8, &g1, &g2, &g8}) c.expect(r->code == 0, "command failed: " + r->err);
  c.expect(t1.out == t2.out && t1.out == t8.out, "build-think stats differ; ");
  c.expect(g1.out == g2.out && g1.out == g8.out, "build-gsmclaims stats differ; ");
  const auto ft = cc::testing::data_files(dir / "t1");
  const auto fg = cc::testing::data_files(dir / "g1");
  c.expect(ft.size() == 5 && fg.size() == 3, "unexpected output file set; ");
  c.expect(ft == cc::testing::data_files(dir / "t2") && ft == cc::testing::data_files(dir / "t8"),
           "build-think outputs differ; ");
  c.expect(fg == cc::testing::data_files(dir / "g2") && fg == cc::testing::data_files(dir / "g8"),
           "build-gsmclaims outputs differ; ");
  c.why << ft.size() << " + " << fg.size() << " files identical over 3 runs each";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria = {
      {"metric oracle equivalence", criterion_1}, {"reward corner table", criterion_2},
      {"parser totality and round trip", criterion_3}, {"filter conservation", criterion_4},
      {"gsmclaims balance", criterion_5}, {"bootstrap power and calibration", criterion_6},
      {"decile analysis", criterion_7}, {"end-to-end determinism", criterion_8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.why << " exception: " << e.what();
    }
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu %s: %s (%s) [%.1fs]\n", i + 1, c.ok ? "PASS" : "FAIL", criteria[i].first,
                c.why.str().c_str(), secs);
    std::fflush(stdout);
    failed += c.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
