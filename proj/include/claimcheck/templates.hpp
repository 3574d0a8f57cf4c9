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

// Prompt template texts, version 1. Placeholders are {name}. The instruction
// prose is one paragraph per block; the tagged layout keeps every tag on its
// own line. Any edit here must bump kTemplateVersion, since dataset manifests
// record the checksum of each template.

#include <string_view>

namespace claimcheck::templates {

inline constexpr std::string_view kTemplateVersion = "v1";

inline constexpr std::string_view kOracleThink =
    "You are expert fact checker with a strong attention to detail and access to a wealth of "
    "information. Given a document and a claim, determine if the claim is entailed by the "
    "document, only using the facts in the document.\n"
    "\n"
    "Respond in the following format:\n"
    "<reasoning>\n"
    "... // clear, but short description of your step by step\n"
    "   // thinking to arrive at the entailment\n"
    "   // keep the reasoning sentences separated by a newline.\n"
    "</reasoning>\n"
    "<entailment>\n"
    "... // This is always a single word, either \"YES\" or \"NO\"\n"
    "</entailment>\n"
    "\n"
    "Document:\n"
    "{document}\n"
    "\n"
    "Claim:\n"
    "{claim}\n";

inline constexpr std::string_view kSftThink =
    "You are given a document and a claim. The document is enclosed between <DOCUMENT> and "
    "</DOCUMENT>. The claim is between <CLAIM> and </CLAIM>. Determine if the claim is entailed "
    "by the document. Think about the problem and provide your reasoning. Place the reasoning "
    "between <REASONING> and </REASONING>. Then, provide your entailment solution between "
    "<SOLUTION> and </SOLUTION>. The entailment should be either a YES or a NO.\n"
    "<DOCUMENT>\n"
    "{document}\n"
    "</DOCUMENT>\n"
    "<CLAIM>\n"
    "{claim}\n"
    "</CLAIM>\n"
    "<REASONING>\n"
    "{reasoning}\n"
    "</REASONING>\n"
    "<SOLUTION>\n"
    "{solution}\n"
    "</SOLUTION>";

inline constexpr std::string_view kSftNoThink =
    "You are given a document and a claim. The document is enclosed between <DOCUMENT> and "
    "</DOCUMENT>. The claim is between <CLAIM> and </CLAIM>. Determine if the claim is entailed "
    "by the document. Provide your entailment solution between <SOLUTION> and </SOLUTION>. The "
    "entailment should be either a YES or a NO.\n"
    "<DOCUMENT>\n"
    "{document}\n"
    "</DOCUMENT>\n"
    "<CLAIM>\n"
    "{claim}\n"
    "</CLAIM>\n"
    "<SOLUTION>\n"
    "{solution}\n"
    "</SOLUTION>";

// The instruction paragraph names no output keys, so the key line after it
// pins the schema the claim-pair parser expects.
inline constexpr std::string_view kGsmClaims =
    "Given an arithmetic problem and a solution, rewrite them as a document and a a pair of "
    "positive and negative claims such the positive claim is entailed by the document (after "
    "solving some arithmetic) and the negative claim is not entailed by the document (after "
    "solving some arithmetic). Produce your answer only as a JSON. Do not add anything before "
    "and after the JSON.\n"
    "The JSON object must have exactly the keys \"document\", \"positive_claim\" and "
    "\"negative_claim\".\n"
    "\n"
    "Problem:\n"
    "{problem}\n"
    "\n"
    "Solution:\n"
    "{solution}\n";

}  // namespace claimcheck::templates
