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

// Library walkthrough with the mock backend: verify a few pairs, score the
// verdicts, and price one completion with the training reward.

#include <iostream>
#include <memory>
#include <vector>

#include "claimcheck/claimcheck.hpp"

int main() {
  using namespace claimcheck;

  const std::vector<GroundedPair> pairs = {
      {"a", "The bridge opened in 1932.", "The Harbor Bridge opened to traffic in 1932.", Verdict::kSupported, ""},
      {"b", "The bridge opened in 1935.", "The Harbor Bridge opened to traffic in 1932.", Verdict::kNotSupported, ""},
      {"c", "The lake has four rivers.", "Lake Verna is fed by two rivers.", Verdict::kNotSupported, ""},
  };

  // Canned verifier replies keyed by prompt; "c" is answered wrongly.
  auto mock = std::make_shared<MockBackend>();
  const char* replies[] = {"The year matches.\n</REASONING>\n<SOLUTION>\nYES\n</SOLUTION>",
                           "The document says 1932.\n</REASONING>\n<SOLUTION>\nNO\n</SOLUTION>",
                           "Rivers are mentioned.\n</REASONING>\n<SOLUTION>\nYES\n</SOLUTION>"};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    mock->set_response(render_verifier_prompt(pairs[i], true).text, replies[i]);
  }
  Client client(mock);

  std::vector<EvalRecord> records;
  for (const auto& pair : pairs) {
    const auto prompt = render_verifier_prompt(pair, true);
    const auto reply = client.complete({pair.id, prompt.text, {}, prompt.stop_marker});
    const auto parsed = parse_verifier_output(reassemble_completion(prompt, reply.text));
    records.push_back({pair.id, *pair.gold, parsed.verdict, parsed.reasoning, "", {}});
    std::cout << pair.id << ": " << (parsed.verdict ? label_name(*parsed.verdict) : "UNPARSEABLE") << "\n";
  }

  const auto counts = confusion(records);
  std::cout << "balanced accuracy: " << balanced_accuracy(counts) << "\n";

  const auto reward = total_reward(std::string("<REASONING>\nx\n</REASONING>\n<SOLUTION>\nNO\n</SOLUTION>"),
                                   Verdict::kNotSupported);
  std::cout << "reward for a correct, well-formed NO: " << reward.total << "\n";
  return 0;
}
