// Copyright 2026 The ech-lab Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace echlab {

// Acceptance suite shared by the acceptance test binary and `ech-lab verify`.
// Every tolerance lives in verify.cpp next to the check that uses it.

struct VerifyOptions {
  unsigned threads = 0;
  std::uint64_t seed = 20240611;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values, one line
  double seconds = 0.0;
};

// Witness indices recorded on the first run; later runs must match exactly.
struct FrozenWitness {
  const char* source;  // inline grammar, unit scale
  const char* target;
  std::int64_t witness_k;
};
const std::vector<FrozenWitness>& frozen_witnesses();

inline constexpr int kCriterionCount = 10;

CriterionResult run_criterion(int id, const VerifyOptions& options = {});
// ids empty runs 1..kCriterionCount.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {},
                                            const VerifyOptions& options = {});

std::string to_json(const std::vector<CriterionResult>& results, int indent = -1);

}  // namespace echlab
