// Copyright 2026 The Authors.
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

// Randomized property checks backing the `verify` subcommand.

#ifndef FEATSEL_VERIFY_HPP_
#define FEATSEL_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace featsel {

struct CheckOutcome {
  std::string name;
  bool passed = true;
  std::size_t trials = 0;
  std::size_t violations = 0;
  // Largest observed violation measure (check-specific units).
  double worst = 0;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int tracks = 500;
  int triples = 1000;
  int instances = 50;
};

// Trace identity, per-frame projector idempotence, monotonicity,
// submodularity and the greedy-vs-exhaustive ratio.
std::vector<CheckOutcome> run_verify(const VerifyOptions& options);

}  // namespace featsel

#endif  // FEATSEL_VERIFY_HPP_
