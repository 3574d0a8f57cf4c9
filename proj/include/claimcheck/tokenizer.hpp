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

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "claimcheck/core.hpp"

namespace claimcheck {

// Token counter used by the prompt-length guard and the length analysis.
// Production runs can adapt a model tokenizer behind this interface.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::size_t count(std::string_view text) const = 0;
  virtual std::string name() const = 0;
};

class WhitespaceTokenizer final : public Tokenizer {
 public:
  std::size_t count(std::string_view s) const override {
    std::size_t n = 0;
    bool in_token = false;
    for (char c : s) {
      if (text::is_space(c)) {
        in_token = false;
      } else if (!in_token) {
        in_token = true;
        ++n;
      }
    }
    return n;
  }
  std::string name() const override { return "whitespace"; }
};

inline std::shared_ptr<const Tokenizer> make_tokenizer(std::string_view name) {
  if (name == "whitespace") return std::make_shared<WhitespaceTokenizer>();
  throw Error(ErrorCode::kConfig, "unknown tokenizer '" + std::string(name) + "'");
}

}  // namespace claimcheck
