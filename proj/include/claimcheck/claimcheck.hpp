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

// Umbrella header.

#include "claimcheck/analysis.hpp"
#include "claimcheck/client.hpp"
#include "claimcheck/core.hpp"
#include "claimcheck/datagen.hpp"
#include "claimcheck/digest.hpp"
#include "claimcheck/gsmclaims.hpp"
#include "claimcheck/io.hpp"
#include "claimcheck/metrics.hpp"
#include "claimcheck/mock.hpp"
#include "claimcheck/parsing.hpp"
#include "claimcheck/prompts.hpp"
#include "claimcheck/records.hpp"
#include "claimcheck/rewards.hpp"
#include "claimcheck/rng.hpp"
#include "claimcheck/tokenizer.hpp"
