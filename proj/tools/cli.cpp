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

#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "claimcheck/claimcheck.hpp"

namespace claimcheck::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kDefaultVerifyCompletion =
    "<REASONING>\nThe document states the fact asserted by the claim.\n</REASONING>\n"
    "<SOLUTION>\nYES\n</SOLUTION>";

std::string default_now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

std::string file_sha256(const fs::path& p) { return sha256_hex(io::read_text_file(p)); }

// Removes every registered output unless the command finished.
class OutputGuard {
 public:
  ~OutputGuard() {
    if (done_) return;
    for (const auto& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
  void add(fs::path p) { written_.push_back(std::move(p)); }
  const std::vector<fs::path>& paths() const { return written_; }
  void finish() { done_ = true; }

 private:
  std::vector<fs::path> written_;
  bool done_ = false;
};

void write_jsonl(const fs::path& path, const std::vector<json>& rows, OutputGuard& guard) {
  io::AtomicFile f(path);
  for (const auto& r : rows) f.write_line(r);
  f.commit();
  guard.add(path);
}

struct DecodingFlags {
  std::optional<double> temperature;
  std::optional<double> top_p;
  std::optional<int> top_k;
  std::optional<int> max_new_tokens;

  void add_to(CLI::App* app) {
    app->add_option("--temperature", temperature, "Sampling temperature (default 1.0)");
    app->add_option("--top-p", top_p, "Nucleus sampling mass (default 0.95)");
    app->add_option("--top-k", top_k, "Top-k cutoff (default 64)");
    app->add_option("--max-new-tokens", max_new_tokens, "Completion token cap (default 378)");
  }

  DecodingParams resolve() const {
    DecodingParams p;
    if (temperature) p.temperature = *temperature;
    if (top_p) p.top_p = *top_p;
    if (top_k) p.top_k = *top_k;
    if (max_new_tokens) p.max_new_tokens = *max_new_tokens;
    p.validate();
    return p;
  }
};

struct BackendFlags {
  std::string config_path;
  bool mock = false;
  std::optional<std::size_t> parallelism;

  void add_to(CLI::App* app) {
    app->add_option("--config", config_path, "Backend config file (JSON)");
    app->add_flag("--mock", mock, "Use the deterministic mock backend");
    app->add_option("--parallelism", parallelism, "Concurrent requests")->check(CLI::PositiveNumber);
  }

  BackendConfig config() const {
    return config_path.empty() ? BackendConfig{} : load_backend_config(config_path);
  }

  std::size_t resolved_parallelism(const BackendConfig& cfg) const {
    return parallelism.value_or(cfg.parallelism);
  }

  json describe(const BackendConfig& cfg) const {
    if (mock) return json{{"kind", "mock"}};
    auto j = cfg.to_json();
    j["kind"] = "http";
    return j;
  }
};

ClientConfig mock_client_config() {
  ClientConfig c;
  c.retry.initial_backoff = std::chrono::milliseconds(0);
  c.sleeper = [](std::chrono::milliseconds) {};
  return c;
}

// Real backend from config + credentials. Missing credentials are a config
// error.
std::unique_ptr<Client> http_client(const BackendConfig& cfg, const CliEnv& env) {
  auto key = env.env(cfg.api_key_env);
  if (!key) throw Error(ErrorCode::kConfig, "no credentials: set " + cfg.api_key_env + " or use --mock");
  return std::make_unique<Client>(std::make_shared<HttpChatBackend>(cfg, *key), cfg.client_config());
}

class ManifestWriter {
 public:
  ManifestWriter(std::string command, const std::vector<std::string>& args, const CliEnv& env)
      : env_(env) {
    manifest_["command"] = std::move(command);
    manifest_["args"] = args;
    manifest_["started_at"] = env_.now_utc();
    manifest_["template_version"] = templates::kTemplateVersion;
    manifest_["template_checksums"] = template_checksums();
    manifest_["inputs"] = json::array();
    manifest_["outputs"] = json::array();
  }

  json& operator[](const char* key) { return manifest_[key]; }

  void config(const json& cfg) {
    manifest_["config"] = cfg;
    manifest_["config_digest"] = sha256_hex(io::dump_line(cfg));
  }

  void input(const fs::path& p) {
    manifest_["inputs"].push_back(json{{"path", p.string()}, {"sha256", file_sha256(p)}});
  }

  // Appends a new file under <dir>/manifests; existing manifests are never
  // rewritten.
  fs::path write(const fs::path& dir, const OutputGuard& outputs) {
    for (const auto& p : outputs.paths()) {
      manifest_["outputs"].push_back(json{{"path", p.string()}, {"sha256", file_sha256(p)}});
    }
    manifest_["finished_at"] = env_.now_utc();
    const auto mdir = dir / "manifests";
    fs::create_directories(mdir);
    std::string stamp = manifest_["started_at"].get<std::string>();
    for (auto& c : stamp) {
      if (c == ':') c = '-';
    }
    const std::string base = manifest_["command"].get<std::string>() + "-" + stamp;
    fs::path path = mdir / (base + ".json");
    for (int n = 1; fs::exists(path); ++n) path = mdir / (base + "-" + std::to_string(n) + ".json");
    io::write_text_file(path, io::dump_pretty(manifest_) + "\n");
    return path;
  }

 private:
  const CliEnv& env_;
  json manifest_;
};

json counts_json(const ConfusionCounts& c) {
  return json{{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}, {"total", c.total()}};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json gsm_stats_json(const GsmBuildStats& s) {
  return json{{"problems", s.problems},
              {"generated", s.generated},
              {"failed", s.failed},
              {"failed_malformed_json", s.failed_malformed_json},
              {"failed_invalid_pair", s.failed_invalid_pair},
              {"failed_invalid_input", s.failed_invalid_input},
              {"failed_backend", s.failed_backend},
              {"instances", s.instances},
              {"supported", s.supported},
              {"not_supported", s.not_supported},
              {"balance", s.balance()}};
}

json bootstrap_json(const BootstrapResult& r) {
  return json{{"metric", to_string(r.metric)},
              {"n", r.n},
              {"metric_a", r.metric_a},
              {"metric_b", r.metric_b},
              {"delta_observed", r.delta_observed},
              {"delta_definition", "metric(a) - metric(b)"},
              {"p_value", r.p_value},
              {"p_value_method",
               "two-sided: 2 * share of resampled deltas on the opposite side of zero or at zero, "
               "clamped to 1"},
              {"ci_low", r.ci_low},
              {"ci_high", r.ci_high},
              {"ci_level", r.ci_level},
              {"ci_method", "percentile"},
              {"resamples", r.resamples},
              {"redraws", r.redraws},
              {"seed", r.seed}};
}

json decile_json(const DecileBucket& b) {
  return json{{"decile", b.index},
              {"min_len", b.min_len},
              {"max_len", b.max_len},
              {"size", b.size},
              {"bacc", optional_number(b.bacc)},
              {"precision", optional_number(b.precision)},
              {"recall", optional_number(b.recall)},
              {"counts", counts_json(b.counts)}};
}

std::string fmt_opt(const std::optional<double>& v) {
  if (!v) return "undef";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(4) << *v;
  return ss.str();
}

// ---------------------------------------------------------------------------

struct BuildThinkCmd {
  std::string input;
  std::string out_dir;
  std::uint64_t seed = 0;
  double dev_fraction = 0.2;
  bool nothink = false;
  double mock_disagree_rate = 0.0;
  double mock_malformed_rate = 0.0;
  std::string mock_plant = "exact";
  BackendFlags backend;
  DecodingFlags decoding;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("build-think", "Annotate pairs with oracle reasoning, filter, split, export");
    sub->add_option("--input", input, "Pairs file {id, claim, document, label, source}")->required();
    sub->add_option("--out-dir", out_dir, "Output directory")->required();
    sub->add_option("--seed", seed, "Seed for the split and mock planting");
    sub->add_option("--dev-fraction", dev_fraction, "Share of kept examples held out as dev");
    sub->add_flag("--nothink", nothink, "Export solution-only training text");
    sub->add_option("--mock-disagree-rate", mock_disagree_rate, "Mock oracle disagreement rate");
    sub->add_option("--mock-malformed-rate", mock_malformed_rate, "Mock oracle malformed-reply rate");
    sub->add_option("--mock-plant", mock_plant, "Planting mode: exact|bernoulli")
        ->check(CLI::IsMember({"exact", "bernoulli"}));
    backend.add_to(sub);
    decoding.add_to(sub);
  }

  int run(const std::vector<std::string>& args, std::ostream& out, const CliEnv& env) {
    const auto params = decoding.resolve();
    if (!(dev_fraction > 0.0 && dev_fraction < 1.0)) {
      throw Error(ErrorCode::kInvalidFraction, "--dev-fraction must be in (0, 1)");
    }
    const auto cfg = backend.config();
    const auto pairs = io::load_pairs(input);

    std::unique_ptr<Client> client;
    if (backend.mock) {
      auto mock = std::make_shared<MockBackend>();
      plant_oracle(*mock, pairs,
                   OraclePersona{mock_disagree_rate, mock_malformed_rate,
                                 mock_plant == "bernoulli" ? PlantMode::kBernoulli : PlantMode::kExact, seed});
      client = std::make_unique<Client>(mock, mock_client_config());
    } else {
      client = http_client(cfg, env);
    }

    ManifestWriter manifest("build-think", args, env);
    manifest.input(input);
    json run_cfg{{"backend", backend.describe(cfg)},
                 {"decoding", decoding_json(params)},
                 {"dev_fraction", dev_fraction},
                 {"with_reasoning", !nothink},
                 {"seed", seed}};
    if (backend.mock) {
      run_cfg["mock"] = {{"disagree_rate", mock_disagree_rate},
                         {"malformed_rate", mock_malformed_rate},
                         {"plant", mock_plant}};
    }
    manifest.config(run_cfg);
    manifest["seed"] = seed;

    const auto outcomes =
        annotate(pairs, *client, AnnotateOptions{params, backend.resolved_parallelism(cfg)});
    const auto filtered = agreement_filter(outcomes);
    const auto split = split_dev(filtered.examples, dev_fraction, seed);

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    OutputGuard guard;

    std::vector<json> rows;
    for (const auto& o : outcomes) {
      rows.push_back(json{{"id", o.pair.id},
                          {"status", to_string(o.status)},
                          {"oracle_verdict", io::verdict_json(o.parsed.verdict)},
                          {"gold", io::verdict_json(o.pair.gold)},
                          {"format_ok", o.parsed.format_ok},
                          {"detail", o.detail}});
    }
    write_jsonl(dir / "annotations.jsonl", rows, guard);
    for (const auto& [name, part] : {std::pair{"train", &split.train}, std::pair{"dev", &split.dev}}) {
      rows.clear();
      for (const auto& ex : *part) rows.push_back(io::example_to_json(ex));
      write_jsonl(dir / (std::string(name) + ".jsonl"), rows, guard);
    }
    ExportOptions xo{!nothink, seed, params, false};
    guard.add(dir / "sft_train.jsonl");
    const auto train_manifest = export_training_file(split.train, dir / "sft_train.jsonl", xo);
    guard.add(dir / "sft_dev.jsonl");
    const auto dev_manifest = export_training_file(split.dev, dir / "sft_dev.jsonl", xo);

    json stats = build_stats_json(filtered.stats);
    stats["train"] = split.train.size();
    stats["dev"] = split.dev.size();
    manifest["stats"] = stats;
    manifest["exports"] = json{{"train", train_manifest}, {"dev", dev_manifest}};
    manifest.write(dir, guard);
    guard.finish();
    out << io::dump_pretty(stats) << "\n";
    return kExitOk;
  }
};

struct BuildGsmCmd {
  std::string input;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool lenient = false;
  std::vector<std::string> mock_invalid;
  std::vector<std::string> mock_prose;
  BackendFlags backend;
  DecodingFlags decoding;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("build-gsmclaims", "Turn math word problems into balanced claim pairs");
    sub->add_option("--input", input, "Problems file {id, question, answer}")->required();
    sub->add_option("--out-dir", out_dir, "Output directory")->required();
    sub->add_option("--seed", seed, "Seed for the output shuffle");
    sub->add_flag("--lenient-json", lenient, "Accept prose around the oracle's JSON object");
    sub->add_option("--mock-invalid", mock_invalid, "Problem id whose mock reply repeats the answer");
    sub->add_option("--mock-prose", mock_prose, "Problem id whose mock reply wraps JSON in prose");
    backend.add_to(sub);
    decoding.add_to(sub);
  }

  int run(const std::vector<std::string>& args, std::ostream& out, const CliEnv& env) {
    const auto params = decoding.resolve();
    const auto cfg = backend.config();
    const auto problems = io::load_problems(input);

    std::unique_ptr<Client> client;
    if (backend.mock) {
      auto mock = std::make_shared<MockBackend>();
      GsmPersona persona;
      persona.invalid_ids.insert(mock_invalid.begin(), mock_invalid.end());
      persona.prose_ids.insert(mock_prose.begin(), mock_prose.end());
      persona.seed = seed;
      plant_gsm(*mock, problems, persona);
      client = std::make_unique<Client>(mock, mock_client_config());
    } else {
      client = http_client(cfg, env);
    }

    ManifestWriter manifest("build-gsmclaims", args, env);
    manifest.input(input);
    json run_cfg{{"backend", backend.describe(cfg)},
                 {"decoding", decoding_json(params)},
                 {"strict_json", !lenient},
                 {"seed", seed}};
    if (backend.mock) run_cfg["mock"] = {{"invalid", mock_invalid}, {"prose", mock_prose}};
    manifest.config(run_cfg);
    manifest["seed"] = seed;

    const auto result = build_gsmclaims(
        problems, *client, GsmBuildOptions{params, backend.resolved_parallelism(cfg), seed, !lenient});

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    OutputGuard guard;
    std::vector<json> rows;
    for (const auto& p : result.dataset) rows.push_back(io::pair_to_json(p));
    write_jsonl(dir / "gsmclaims.jsonl", rows, guard);
    rows.clear();
    for (const auto& r : result.records) {
      rows.push_back(json{{"source_id", r.source_id},
                          {"document", r.document},
                          {"positive_claim", r.positive_claim},
                          {"negative_claim", r.negative_claim}});
    }
    write_jsonl(dir / "claim_pairs.jsonl", rows, guard);
    rows.clear();
    for (const auto& f : result.failures) {
      rows.push_back(json{{"id", f.problem_id}, {"error", to_string(f.code)}, {"message", f.message}});
    }
    write_jsonl(dir / "failures.jsonl", rows, guard);

    const auto stats = gsm_stats_json(result.stats);
    manifest["stats"] = stats;
    manifest.write(dir, guard);
    guard.finish();
    out << io::dump_pretty(stats) << "\n";
    return kExitOk;
  }
};

struct EvaluateCmd {
  std::string predictions;
  std::string metric = "bacc";
  std::string out_path;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("evaluate", "Score a predictions file");
    sub->add_option("--predictions", predictions, "Predictions {id, gold, predicted, ...}")->required();
    sub->add_option("--metric", metric, "bacc|acc")->check(CLI::IsMember({"bacc", "acc"}, CLI::ignore_case));
    sub->add_option("--out", out_path, "Also write the report here");
  }

  int run(const std::vector<std::string>& args, std::ostream& out, const CliEnv& env) {
    const auto m = parse_metric(metric);
    const auto records = io::load_predictions(predictions);
    const auto c = confusion(records);
    std::size_t missing = 0;
    for (const auto& r : records) missing += r.predicted ? 0 : 1;
    json report{{"predictions", predictions},
                {"metric", to_string(m)},
                {"value", metric_value(c, m)},
                {"counts", counts_json(c)},
                {"missing_predictions", missing},
                {"missing_policy", "scored as incorrect"}};
    if (c.total() > 0) report["accuracy"] = accuracy(c);
    report["bacc"] = c.positives() > 0 && c.negatives() > 0 ? json(balanced_accuracy(c)) : json(nullptr);
    if (!out_path.empty()) {
      ManifestWriter manifest("evaluate", args, env);
      manifest.input(predictions);
      manifest.config(json{{"metric", to_string(m)}});
      OutputGuard guard;
      io::write_text_file(out_path, io::dump_pretty(report) + "\n");
      guard.add(out_path);
      manifest["stats"] = report;
      manifest.write(fs::path(out_path).parent_path(), guard);
      guard.finish();
    }
    out << io::dump_pretty(report) << "\n";
    return kExitOk;
  }
};

struct CompareCmd {
  std::string a;
  std::string b;
  std::string metric = "bacc";
  std::size_t resamples = 10000;
  std::uint64_t seed = 0;
  double ci = 0.95;
  std::string out_path;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("compare", "Paired bootstrap comparison of two prediction files");
    sub->add_option("--a", a, "Predictions of system A")->required();
    sub->add_option("--b", b, "Predictions of system B")->required();
    sub->add_option("--metric", metric, "bacc|acc")->check(CLI::IsMember({"bacc", "acc"}, CLI::ignore_case));
    sub->add_option("--resamples", resamples, "Bootstrap resamples")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Bootstrap seed");
    sub->add_option("--ci", ci, "Confidence level");
    sub->add_option("--out", out_path, "Also write the report here");
  }

  int run(const std::vector<std::string>& args, std::ostream& out, const CliEnv& env) {
    const auto ra = io::load_predictions(a);
    const auto rb = io::load_predictions(b);
    const auto result = paired_bootstrap(ra, rb, parse_metric(metric), BootstrapOptions{resamples, seed, ci});
    auto report = bootstrap_json(result);
    report["a"] = a;
    report["b"] = b;
    if (!out_path.empty()) {
      ManifestWriter manifest("compare", args, env);
      manifest.input(a);
      manifest.input(b);
      manifest.config(json{{"metric", metric}, {"resamples", resamples}, {"ci", ci}, {"seed", seed}});
      manifest["seed"] = seed;
      OutputGuard guard;
      io::write_text_file(out_path, io::dump_pretty(report) + "\n");
      guard.add(out_path);
      manifest["stats"] = report;
      manifest.write(fs::path(out_path).parent_path(), guard);
      guard.finish();
    }
    out << io::dump_pretty(report) << "\n";
    return kExitOk;
  }
};

struct LengthAnalysisCmd {
  std::string predictions;
  std::string tokenizer = "whitespace";
  std::string out_dir;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("length-analysis", "Scores by reasoning-length decile");
    sub->add_option("--predictions", predictions, "Predictions with reasoning spans")->required();
    sub->add_option("--tokenizer", tokenizer, "Tokenizer (whitespace)");
    sub->add_option("--out-dir", out_dir, "Write deciles.jsonl and deciles_plot.tsv here");
  }

  int run(const std::vector<std::string>& args, std::ostream& out, const CliEnv& env) {
    const auto tok = make_tokenizer(tokenizer);
    const auto records = io::load_predictions(predictions);
    const auto report = length_decile_analysis(records, *tok);

    out << "decile\tmin_len\tmax_len\tsize\tbacc\tprecision\trecall\n";
    for (const auto& b : report.buckets) {
      out << b.index << '\t' << b.min_len << '\t' << b.max_len << '\t' << b.size << '\t'
          << fmt_opt(b.bacc) << '\t' << fmt_opt(b.precision) << '\t' << fmt_opt(b.recall) << '\n';
    }
    out << "# excluded (no reasoning): " << report.excluded << "\n";

    if (!out_dir.empty()) {
      const fs::path dir(out_dir);
      fs::create_directories(dir);
      ManifestWriter manifest("length-analysis", args, env);
      manifest.input(predictions);
      manifest.config(json{{"tokenizer", report.tokenizer}});
      OutputGuard guard;
      std::vector<json> rows;
      for (const auto& b : report.buckets) rows.push_back(decile_json(b));
      write_jsonl(dir / "deciles.jsonl", rows, guard);
      std::ostringstream plot;
      plot << "decile\tbacc\n";
      for (const auto& b : report.buckets) plot << (b.index + 1) << '\t' << fmt_opt(b.bacc) << '\n';
      io::write_text_file(dir / "deciles_plot.tsv", plot.str());
      guard.add(dir / "deciles_plot.tsv");
      manifest["stats"] = json{{"excluded", report.excluded}, {"records", records.size()}};
      manifest.write(dir, guard);
      guard.finish();
    }
    return kExitOk;
  }
};

struct ErrorReportCmd {
  std::string predictions;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("error-report", "Per-tag error counts and shares");
    sub->add_option("--predictions", predictions, "Predictions with 'tags'")->required();
  }

  int run(std::ostream& out) {
    const auto records = io::load_predictions(predictions);
    const auto report = error_report(records);
    json tags = json::array();
    for (const auto& t : report.tags) {
      tags.push_back(json{{"tag", to_string(t.tag)},
                          {"count", t.count},
                          {"share_of_errors", t.share_of_errors},
                          {"share_of_all", t.share_of_all}});
    }
    out << io::dump_pretty(json{{"records", report.records},
                                {"errors", report.errors},
                                {"tagged", report.tagged},
                                {"overlap", report.overlap},
                                {"tags", tags}})
        << "\n";
    return kExitOk;
  }
};

struct VerifyCmd {
  std::string claim;
  std::string document;
  bool nothink = false;
  std::string mock_completion = kDefaultVerifyCompletion;
  bool mock_unavailable = false;
  BackendFlags backend;
  DecodingFlags decoding;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("verify", "Verify one claim against one document");
    sub->add_option("--claim", claim, "Claim text")->required();
    sub->add_option("--document", document, "Document text")->required();
    sub->add_flag("--nothink", nothink, "Use the solution-only prompt");
    sub->add_option("--mock-completion", mock_completion, "Completion returned by --mock");
    sub->add_flag("--mock-unavailable", mock_unavailable, "Make the mock backend fail every call");
    backend.add_to(sub);
    decoding.add_to(sub);
  }

  int run(std::ostream& out, const CliEnv& env) {
    const auto params = decoding.resolve();
    const auto cfg = backend.config();
    const GroundedPair pair{"verify", claim, document, std::nullopt, ""};
    const auto prompt = render_verifier_prompt(pair, !nothink);

    std::unique_ptr<Client> client;
    if (backend.mock) {
      auto mock = std::make_shared<MockBackend>(mock_completion);
      if (mock_unavailable) mock->fail_permanently(prompt.text);
      client = std::make_unique<Client>(mock, mock_client_config());
    } else {
      client = http_client(cfg, env);
    }
    const auto result = client->complete(CompletionRequest{"verify", prompt.text, params, prompt.stop_marker});
    const auto full = reassemble_completion(prompt, result.text);
    const auto parsed = nothink ? parse_nothink_output(full) : parse_verifier_output(full);

    json report{{"verdict", parsed.verdict ? json(label_name(*parsed.verdict)) : json("UNPARSEABLE")},
                {"reasoning", parsed.reasoning ? json(*parsed.reasoning) : json(nullptr)},
                {"format_ok", parsed.format_ok},
                {"attempts", result.attempts},
                {"decoding", decoding_json(params)},
                {"backend", client->backend().name()}};
    out << io::dump_pretty(report) << "\n";
    return kExitOk;
  }
};

struct RewardCheckCmd {
  std::string completions;
  std::string out_path;
  RewardConfig cfg;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("reward-check", "Score completions with the format+accuracy reward");
    sub->add_option("--completions", completions, "Records {id, completion, gold}")->required();
    sub->add_option("--out", out_path, "Write per-record breakdowns here");
    sub->add_option("--format-weight", cfg.format_weight, "Weight of the format term");
    sub->add_option("--accuracy-weight", cfg.accuracy_weight, "Weight of the accuracy term");
    sub->add_option("--w-yes", cfg.w_yes, "Class weight for SUPPORTED gold");
    sub->add_option("--w-no", cfg.w_no, "Class weight for NOT_SUPPORTED gold");
    sub->add_option("--scale", cfg.scale, "Accuracy reward scale");
  }

  int run(const std::vector<std::string>& args, std::ostream& out, const CliEnv& env) {
    cfg.validate();
    std::vector<json> rows;
    double sum = 0.0;
    std::size_t format_ok = 0;
    std::size_t correct = 0;
    io::for_each_record(completions, [&](const json& j, std::size_t line) {
      const auto gold = io::verdict_field(j, "gold");
      if (!gold) throw Error(ErrorCode::kInvalidInput, "missing 'gold'");
      const auto completion = io::string_field(j, "completion");
      const auto r = total_reward(completion, *gold, cfg);
      sum += r.total;
      format_ok += r.parsed.format_ok ? 1 : 0;
      correct += r.parsed.verdict == *gold ? 1 : 0;
      rows.push_back(json{{"id", j.contains("id") ? json(io::id_field(j)) : json(line)},
                          {"gold", to_bit(*gold)},
                          {"predicted", io::verdict_json(r.parsed.verdict)},
                          {"format_ok", r.parsed.format_ok},
                          {"format_term", r.format_term},
                          {"accuracy_term", r.accuracy_term},
                          {"total", r.total}});
    });
    const json aggregate{{"count", rows.size()},
                         {"mean_total", rows.empty() ? 0.0 : sum / static_cast<double>(rows.size())},
                         {"format_ok", format_ok},
                         {"correct", correct},
                         {"config",
                          {{"format_weight", cfg.format_weight},
                           {"accuracy_weight", cfg.accuracy_weight},
                           {"w_yes", cfg.w_yes},
                           {"w_no", cfg.w_no},
                           {"scale", cfg.scale}}}};
    if (!out_path.empty()) {
      ManifestWriter manifest("reward-check", args, env);
      manifest.input(completions);
      manifest.config(aggregate["config"]);
      OutputGuard guard;
      write_jsonl(out_path, rows, guard);
      manifest["stats"] = aggregate;
      manifest.write(fs::path(out_path).parent_path(), guard);
      guard.finish();
    }
    for (const auto& r : rows) out << io::dump_line(r) << "\n";
    out << io::dump_line(json{{"aggregate", aggregate}}) << "\n";
    return kExitOk;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliEnv& env_in) {
  CliEnv env = env_in;
  if (!env.now_utc) env.now_utc = default_now_utc;
  if (!env.env) env.env = process_env();

  CLI::App app{"claimcheck: grounded claim-verification pipeline", "claimcheck"};
  app.require_subcommand(1);
  BuildThinkCmd build_think;
  BuildGsmCmd build_gsm;
  EvaluateCmd evaluate;
  CompareCmd compare;
  LengthAnalysisCmd length;
  ErrorReportCmd errors;
  VerifyCmd verify;
  RewardCheckCmd reward;
  build_think.add(app);
  build_gsm.add(app);
  evaluate.add(app);
  compare.add(app);
  length.add(app);
  errors.add(app);
  verify.add(app);
  reward.add(app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "build-think") return build_think.run(args, out, env);
    if (cmd == "build-gsmclaims") return build_gsm.run(args, out, env);
    if (cmd == "evaluate") return evaluate.run(args, out, env);
    if (cmd == "compare") return compare.run(args, out, env);
    if (cmd == "length-analysis") return length.run(args, out, env);
    if (cmd == "error-report") return errors.run(out);
    if (cmd == "verify") return verify.run(out, env);
    if (cmd == "reward-check") return reward.run(args, out, env);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code == ErrorCode::kBackendExhausted ? kExitBackend : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << "error: unknown command " << cmd << "\n";
  return kExitUsage;
}

}  // namespace claimcheck::cli
