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

#include "featsel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "featsel/random_instance.hpp"
#include "featsel/selection.hpp"
#include "featsel/vision.hpp"

namespace featsel {
namespace {

void record(CheckOutcome& c, double violation) {
  ++c.trials;
  if (violation > 0) {
    ++c.violations;
    c.passed = false;
  }
  c.worst = std::max(c.worst, violation);
}

}  // namespace

std::vector<CheckOutcome> run_verify(const VerifyOptions& options) {
  Rng rng(options.seed);

  CheckOutcome trace{"trace identity tr(H) = 2 n_f - 3"};
  CheckOutcome projector{"per-frame E_i^T E_i idempotent"};
  for (int t = 0; t < options.tracks; ++t) {
    const int M = 3 + static_cast<int>(rng.uniform_index(18));
    const int n_f = 2 + static_cast<int>(rng.uniform_index(M));
    const auto poses = random_poses(M, rng);
    const auto rig = random_rig(rng);
    const auto track = random_track(t, n_f, poses, rig, rng);
    const auto info = feature_information(track, 1.0);
    const double expected = 2.0 * n_f - 3.0;
    record(trace, std::abs(info.trace - expected) - 1e-8 * expected);
    for (int i = 0; i < n_f; ++i) {
      const Matrix3d e = track.E.block<3, 3>(3 * i, 0);
      const Matrix3d p = e.transpose() * e;
      record(projector, (p * p - p).cwiseAbs().maxCoeff() - 1e-10);
    }
  }

  CheckOutcome mono{"monotonicity rho(A) <= rho(B)"};
  CheckOutcome submod{"submodularity gain(e|A) >= gain(e|B)"};
  constexpr int kPerInstance = 50;
  std::optional<RandomInstance> inst;
  std::optional<Objective> obj;
  for (int t = 0; t < options.triples; ++t) {
    if (t % kPerInstance == 0) {
      inst = random_instance(12, 5, rng);
      obj.emplace(inst->objective());
    }
    const auto ids = obj->ids();
    const auto triple = random_nested_triple(ids, rng);
    record(mono, rho(*obj, triple.a) - rho(*obj, triple.b) - 1e-10);
    const double ga = marginal_gain(*obj, triple.a, triple.e);
    const double gb = marginal_gain(*obj, triple.b, triple.e);
    record(submod, gb - ga - 1e-10);
  }

  CheckOutcome ratio{"greedy >= (1 - 1/e) exhaustive optimum"};
  for (int t = 0; t < options.instances; ++t) {
    const auto instance = random_instance(10, 4, rng);
    const Objective o = instance.objective();
    const double g = greedy(o, 3).objective_value;
    const double opt = brute_force(o, 3).objective_value;
    record(ratio, (1.0 - std::exp(-1.0)) * opt - 1e-9 - g);
  }

  return {trace, projector, mono, submod, ratio};
}

}  // namespace featsel
