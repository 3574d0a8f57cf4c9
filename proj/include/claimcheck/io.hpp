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

// Line-delimited JSON record schemas and file helpers.
//
//   pairs        {id, claim, document, label, source}
//   examples     pairs + {reasoning}
//   predictions  {id, gold, predicted, reasoning, source, tags}
//   problems     {id, question, answer}
//   completions  {id, completion, gold}
//
// Labels are written as 1 (SUPPORTED) / 0 (NOT_SUPPORTED); on input, bits,
// booleans, YES/NO and common dataset label names are accepted.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "claimcheck/core.hpp"
#include "claimcheck/gsmclaims.hpp"
#include "claimcheck/records.hpp"

namespace claimcheck::io {

using nlohmann::json;

// Compact, key-sorted, invalid UTF-8 replaced.
inline std::string dump_line(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

inline std::string dump_pretty(const json& j) {
  return j.dump(2, ' ', false, json::error_handler_t::replace);
}

// Writes to a sibling temp file; rename on commit. Uncommitted output is
// removed when the writer goes away.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path target)
      : target_(std::move(target)), temp_(target_.string() + ".partial") {
    if (target_.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(target_.parent_path(), ec);
    }
    out_.open(temp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error(ErrorCode::kIoFailure, "cannot open " + temp_.string() + " for writing");
  }
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  ~AtomicFile() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(temp_, ec);
    }
  }

  std::ostream& stream() { return out_; }
  const std::filesystem::path& path() const { return target_; }

  void write_line(const json& j) { out_ << dump_line(j) << '\n'; }

  void commit() {
    out_.flush();
    if (!out_) throw Error(ErrorCode::kIoFailure, "write failed for " + temp_.string());
    out_.close();
    std::error_code ec;
    std::filesystem::rename(temp_, target_, ec);
    if (ec) throw Error(ErrorCode::kIoFailure, "rename to " + target_.string() + ": " + ec.message());
    committed_ = true;
  }

 private:
  std::filesystem::path target_;
  std::filesystem::path temp_;
  std::ofstream out_;
  bool committed_ = false;
};

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
  AtomicFile f(path);
  f.stream() << content;
  f.commit();
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Calls fn(record, line_number) for every non-blank line. Parse failures
// and exceptions from fn are reported as InvalidInput with the location.
inline void for_each_record(const std::filesystem::path& path,
                            const std::function<void(const json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::is_blank(line)) continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorCode::kInvalidInput, where + ": not a JSON object");
    }
    try {
      fn(j, line_no);
    } catch (const Error& e) {
      if (e.code == ErrorCode::kInvalidInput || e.code == ErrorCode::kEmptyField ||
          e.code == ErrorCode::kUnrecognizedVerdict) {
        throw Error(ErrorCode::kInvalidInput, where + ": " + e.what());
      }
      throw;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kInvalidInput, where + ": " + e.what());
    }
  }
}

inline std::string id_field(const json& j, const char* key = "id") {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) throw Error(ErrorCode::kInvalidInput, std::string("missing '") + key + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw Error(ErrorCode::kInvalidInput, std::string("'") + key + "' must be a string or integer");
}

inline std::string string_field(const json& j, const char* key, bool required = true) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    if (required) throw Error(ErrorCode::kInvalidInput, std::string("missing '") + key + "'");
    return {};
  }
  if (!it->is_string()) throw Error(ErrorCode::kInvalidInput, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

// null / absent -> nullopt. Unrecognized values throw.
inline std::optional<Verdict> verdict_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (it->is_boolean()) return it->get<bool>() ? Verdict::kSupported : Verdict::kNotSupported;
  if (it->is_number_integer()) {
    const auto v = it->get<long long>();
    if (v == 0 || v == 1) return from_bit(static_cast<int>(v));
  }
  if (it->is_string()) {
    if (auto v = try_parse_label(it->get<std::string>())) return v;
  }
  throw Error(ErrorCode::kInvalidInput, std::string("unrecognized label in '") + key + "': " + it->dump());
}

inline json verdict_json(std::optional<Verdict> v) {
  return v ? json(to_bit(*v)) : json(nullptr);
}

inline GroundedPair pair_from_json(const json& j) {
  GroundedPair p;
  p.id = id_field(j);
  p.claim = string_field(j, "claim");
  p.document = string_field(j, "document");
  p.gold = verdict_field(j, "label");
  p.source = string_field(j, "source", false);
  require_content(p);
  return p;
}

inline json pair_to_json(const GroundedPair& p) {
  return json{{"id", p.id}, {"claim", p.claim}, {"document", p.document},
              {"label", verdict_json(p.gold)}, {"source", p.source}};
}

inline json example_to_json(const ReasoningExample& ex) {
  auto j = pair_to_json(ex.pair);
  j["label"] = to_bit(ex.verdict);
  j["reasoning"] = ex.reasoning;
  return j;
}

inline ReasoningExample example_from_json(const json& j) {
  ReasoningExample ex;
  ex.pair = pair_from_json(j);
  if (!ex.pair.gold) throw Error(ErrorCode::kInvalidInput, "example without label");
  ex.verdict = *ex.pair.gold;
  ex.reasoning = string_field(j, "reasoning");
  validate(ex);
  return ex;
}

inline EvalRecord eval_record_from_json(const json& j) {
  EvalRecord r;
  r.id = id_field(j);
  auto gold = verdict_field(j, "gold");
  if (!gold) throw Error(ErrorCode::kInvalidInput, "missing 'gold'");
  r.gold = *gold;
  if (auto it = j.find("predicted"); it != j.end() && it->is_string() &&
                                     text::to_upper(text::trim(it->get<std::string>())) == "UNPARSEABLE") {
    r.predicted = std::nullopt;
  } else {
    r.predicted = verdict_field(j, "predicted");
  }
  if (auto it = j.find("reasoning"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw Error(ErrorCode::kInvalidInput, "'reasoning' must be a string");
    r.reasoning = it->get<std::string>();
  }
  r.source = string_field(j, "source", false);
  if (auto it = j.find("tags"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw Error(ErrorCode::kInvalidInput, "'tags' must be an array");
    for (const auto& t : *it) {
      auto tag = t.is_string() ? parse_error_tag(t.get<std::string>()) : std::nullopt;
      if (!tag) throw Error(ErrorCode::kInvalidInput, "unknown error tag " + t.dump());
      r.tags.push_back(*tag);
    }
  }
  return r;
}

inline json eval_record_to_json(const EvalRecord& r) {
  json tags = json::array();
  for (auto t : r.tags) tags.push_back(std::string(to_string(t)));
  return json{{"id", r.id},
              {"gold", to_bit(r.gold)},
              {"predicted", verdict_json(r.predicted)},
              {"reasoning", r.reasoning ? json(*r.reasoning) : json(nullptr)},
              {"source", r.source},
              {"tags", tags}};
}

inline GsmProblem problem_from_json(const json& j) {
  GsmProblem p;
  p.id = id_field(j);
  p.question = string_field(j, "question");
  p.answer = string_field(j, "answer");
  if (text::is_blank(p.question) || text::is_blank(p.answer)) {
    throw Error(ErrorCode::kEmptyField, "question/answer of '" + p.id + "'");
  }
  return p;
}

template <typename T>
std::vector<T> load_records(const std::filesystem::path& path, T (*parse)(const json&),
                            bool unique_ids = true) {
  std::vector<T> out;
  std::set<std::string> ids;
  for_each_record(path, [&](const json& j, std::size_t) {
    out.push_back(parse(j));
    if (unique_ids) {
      const std::string& id = [&]() -> const std::string& {
        if constexpr (requires { out.back().pair; }) {
          return out.back().pair.id;
        } else {
          return out.back().id;
        }
      }();
      if (!ids.insert(id).second) throw Error(ErrorCode::kInvalidInput, "duplicate id '" + id + "'");
    }
  });
  return out;
}

inline std::vector<GroundedPair> load_pairs(const std::filesystem::path& path) {
  return load_records<GroundedPair>(path, &pair_from_json);
}

inline std::vector<EvalRecord> load_predictions(const std::filesystem::path& path) {
  return load_records<EvalRecord>(path, &eval_record_from_json);
}

inline std::vector<GsmProblem> load_problems(const std::filesystem::path& path) {
  return load_records<GsmProblem>(path, &problem_from_json);
}

inline std::vector<ReasoningExample> load_examples(const std::filesystem::path& path) {
  return load_records<ReasoningExample>(path, &example_from_json);
}

}  // namespace claimcheck::io
