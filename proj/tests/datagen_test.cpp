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

#include "claimcheck/datagen.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "claimcheck/mock.hpp"

namespace claimcheck {
namespace {

namespace fs = std::filesystem;

std::vector<GroundedPair> make_pairs(std::size_t n) {
  std::vector<GroundedPair> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(GroundedPair{"p" + std::to_string(i), "Claim number " + std::to_string(i) + ".",
                               "Document " + std::to_string(i) + " says things.",
                               from_bit(static_cast<int>(i % 3 == 0)), "unit"});
  }
  return out;
}

ClientConfig fast_config() {
  ClientConfig c;
  c.sleeper = [](std::chrono::milliseconds) {};
  return c;
}

fs::path temp_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("claimcheck_datagen_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

TEST(AnnotateTest, AllAgreeAllKept) {
  const auto pairs = make_pairs(4);
  auto mock = std::make_shared<MockBackend>();
  plant_oracle(*mock, pairs, OraclePersona{});
  Client client(mock, fast_config());
  const auto outcomes = annotate(pairs, client);
  ASSERT_EQ(outcomes.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(outcomes[i].status, AnnotationStatus::kKept);
    EXPECT_EQ(outcomes[i].pair.id, pairs[i].id);
  }
}

TEST(AnnotateTest, OneDisagreementDropped) {
  const auto pairs = make_pairs(4);
  auto mock = std::make_shared<MockBackend>();
  for (std::size_t i = 0; i < 4; ++i) {
    const auto v = i == 2 ? flip(*pairs[i].gold) : *pairs[i].gold;
    mock->set_response(render_oracle_prompt(pairs[i]).text, mock_oracle_completion(pairs[i], v));
  }
  Client client(mock, fast_config());
  const auto outcomes = annotate(pairs, client);
  const auto filtered = agreement_filter(outcomes);
  EXPECT_EQ(filtered.stats.kept, 3u);
  EXPECT_EQ(filtered.stats.dropped_disagree, 1u);
  EXPECT_EQ(outcomes[2].status, AnnotationStatus::kDroppedDisagree);
  for (const auto& ex : filtered.examples) EXPECT_NE(ex.pair.id, "p2");
}

TEST(AnnotateTest, TaglessReplyIsMalformed) {
  const auto pairs = make_pairs(2);
  auto mock = std::make_shared<MockBackend>("The claim is supported. YES");
  Client client(mock, fast_config());
  const auto outcomes = annotate(pairs, client);
  for (const auto& o : outcomes) EXPECT_EQ(o.status, AnnotationStatus::kDroppedMalformed);
}

TEST(AnnotateTest, EmptyReasoningIsMalformed) {
  const auto pairs = make_pairs(1);
  auto mock = std::make_shared<MockBackend>("<reasoning> </reasoning><entailment>NO</entailment>");
  Client client(mock, fast_config());
  EXPECT_EQ(annotate(pairs, client)[0].status, AnnotationStatus::kDroppedMalformed);
}

TEST(AnnotateTest, BackendFailureIsItsOwnCategory) {
  const auto pairs = make_pairs(3);
  auto mock = std::make_shared<MockBackend>();
  plant_oracle(*mock, pairs, OraclePersona{});
  mock->fail_permanently(render_oracle_prompt(pairs[1]).text);
  auto cfg = fast_config();
  cfg.retry.max_attempts = 2;
  Client client(mock, cfg);
  const auto outcomes = annotate(pairs, client);
  EXPECT_EQ(outcomes[1].status, AnnotationStatus::kDroppedBackend);
  EXPECT_FALSE(outcomes[1].detail.empty());
  const auto stats = agreement_filter(outcomes).stats;
  EXPECT_EQ(stats.kept, 2u);
  EXPECT_EQ(stats.dropped_backend, 1u);
}

TEST(AnnotateTest, RequiresGold) {
  auto pairs = make_pairs(1);
  pairs[0].gold.reset();
  Client client(std::make_shared<MockBackend>("x"), fast_config());
  EXPECT_THROW(annotate(pairs, client), Error);
}

TEST(AgreementFilterTest, Counting) {
  std::vector<AnnotationOutcome> outcomes(10);
  for (std::size_t i = 0; i < 10; ++i) {
    outcomes[i].pair = make_pairs(10)[i];
    if (i < 8) {
      outcomes[i].status = AnnotationStatus::kKept;
      outcomes[i].parsed.reasoning = "r";
      outcomes[i].parsed.verdict = outcomes[i].pair.gold;
      outcomes[i].parsed.format_ok = true;
    } else {
      outcomes[i].status = AnnotationStatus::kDroppedDisagree;
    }
  }
  const auto f = agreement_filter(outcomes);
  EXPECT_DOUBLE_EQ(f.stats.retention_rate, 0.8);
  EXPECT_EQ(f.examples.size(), 8u);
  for (const auto& ex : f.examples) EXPECT_EQ(ex.verdict, *ex.pair.gold);
}

TEST(AgreementFilterTest, EmptyInput) {
  const auto f = agreement_filter({});
  EXPECT_TRUE(f.examples.empty());
  EXPECT_EQ(f.stats.input_count, 0u);
  EXPECT_DOUBLE_EQ(f.stats.retention_rate, 0.0);
}

// The planted disagreement rate is a Bernoulli(0.21) per item, so kept is
// Binomial(1000, 0.79): mean 790, sd ~12.9.
TEST(AgreementFilterTest, PlantedDisagreementRetention) {
  const auto pairs = make_pairs(1000);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto mock = std::make_shared<MockBackend>();
    plant_oracle(*mock, pairs, OraclePersona{0.21, 0.0, PlantMode::kBernoulli, seed});
    Client client(mock, fast_config());
    const auto f = agreement_filter(annotate(pairs, client, {{}, 4}));
    EXPECT_EQ(f.stats.kept + f.stats.dropped_disagree + f.stats.dropped_malformed + f.stats.dropped_backend,
              1000u);
    EXPECT_NEAR(static_cast<double>(f.stats.kept), 790.0, 4 * 12.9) << "seed " << seed;
  }
  auto mock = std::make_shared<MockBackend>();
  plant_oracle(*mock, pairs, OraclePersona{0.21, 0.0, PlantMode::kExact, 9});
  Client client(mock, fast_config());
  EXPECT_EQ(agreement_filter(annotate(pairs, client)).stats.kept, 790u);
}

std::vector<ReasoningExample> make_examples(std::size_t n) {
  std::vector<ReasoningExample> out;
  for (const auto& p : make_pairs(n)) out.push_back(ReasoningExample{p, "Because " + p.id + ".", *p.gold});
  return out;
}

TEST(SplitDevTest, SizesAndPartition) {
  const auto ex = make_examples(10);
  const auto s = split_dev(ex, 0.2, 42);
  EXPECT_EQ(s.dev.size(), 2u);
  EXPECT_EQ(s.train.size(), 8u);
  std::set<std::string> ids;
  for (const auto& e : s.train) ids.insert(e.pair.id);
  for (const auto& e : s.dev) EXPECT_TRUE(ids.insert(e.pair.id).second);
  EXPECT_EQ(ids.size(), 10u);
}

TEST(SplitDevTest, Deterministic) {
  const auto ex = make_examples(50);
  const auto a = split_dev(ex, 0.2, 7);
  const auto b = split_dev(ex, 0.2, 7);
  const auto c = split_dev(ex, 0.2, 8);
  ASSERT_EQ(a.dev.size(), b.dev.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.dev.size(); ++i) {
    EXPECT_EQ(a.dev[i].pair.id, b.dev[i].pair.id);
    differs |= a.dev[i].pair.id != c.dev[i].pair.id;
  }
  EXPECT_TRUE(differs);
}

TEST(SplitDevTest, RoundingAtScale) {
  const auto ex = make_examples(24100);
  const auto s = split_dev(ex, 0.2, 1);
  EXPECT_EQ(s.dev.size(), 4820u);
  EXPECT_EQ(s.train.size(), 19280u);
}

TEST(SplitDevTest, InvalidFraction) {
  const auto ex = make_examples(3);
  for (double f : {0.0, 1.0, -0.1, 1.5}) {
    try {
      split_dev(ex, f, 0);
      FAIL() << f;
    } catch (const Error& e) {
      EXPECT_EQ(e.code, ErrorCode::kInvalidFraction);
    }
  }
}

TEST(ExportTest, ThinkRecordsAndManifest) {
  const auto dir = temp_dir("think");
  const auto ex = make_examples(3);
  const auto manifest = export_training_file(ex, dir / "sft.jsonl", ExportOptions{true, 5, {}, true});
  std::size_t lines = 0;
  io::for_each_record(dir / "sft.jsonl", [&](const nlohmann::json& j, std::size_t) {
    ++lines;
    const auto t = j["text"].get<std::string>();
    EXPECT_NE(t.find("<REASONING>"), std::string::npos);
    EXPECT_EQ(t, j["prompt"].get<std::string>() + j["completion"].get<std::string>());
  });
  EXPECT_EQ(lines, 3u);
  EXPECT_EQ(manifest["sft_hyperparameters"]["lora_rank"], 64);
  EXPECT_EQ(manifest["sft_hyperparameters"]["lora_alpha"], 64);
  EXPECT_EQ(manifest["seed"], 5);
  EXPECT_EQ(manifest["template"]["kind"], "sft_think");
  EXPECT_TRUE(fs::exists(dir / "sft.jsonl.manifest.json"));
}

TEST(ExportTest, NoThinkRecords) {
  const auto dir = temp_dir("nothink");
  export_training_file(make_examples(3), dir / "sft.jsonl", ExportOptions{false, 0, {}, false});
  io::for_each_record(dir / "sft.jsonl", [&](const nlohmann::json& j, std::size_t) {
    const auto t = j["text"].get<std::string>();
    EXPECT_EQ(t.find("<REASONING>"), std::string::npos);
    EXPECT_NE(t.find("<SOLUTION>"), std::string::npos);
  });
  EXPECT_FALSE(fs::exists(dir / "sft.jsonl.manifest.json"));
}

TEST(ExportTest, ReExportIsByteIdentical) {
  const auto dir = temp_dir("repeat");
  const auto ex = make_examples(20);
  export_training_file(ex, dir / "a.jsonl");
  export_training_file(ex, dir / "b.jsonl");
  EXPECT_EQ(io::read_text_file(dir / "a.jsonl"), io::read_text_file(dir / "b.jsonl"));
}

}  // namespace
}  // namespace claimcheck
