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

// Seeded random geometry and selection instances for property checks.

#ifndef FEATSEL_RANDOM_INSTANCE_HPP_
#define FEATSEL_RANDOM_INSTANCE_HPP_

#include <span>
#include <vector>

#include "featsel/motion.hpp"
#include "featsel/numerics.hpp"
#include "featsel/rng.hpp"
#include "featsel/selection.hpp"
#include "featsel/vision.hpp"

namespace featsel {

// Uniformly distributed rotation (normalized Gaussian quaternion).
Matrix3d random_rotation(Rng& rng);

Vector3d random_unit_vector(Rng& rng);

// Random walk of M + 1 positions with independent random orientations.
PoseSequenced random_poses(int M, Rng& rng);

CameraRigd random_rig(Rng& rng);

// Random positive-definite matrix with eigenvalues in [lo, hi].
SymmetricMatrixd random_spd(Index dim, Rng& rng, double lo = 0.5,
                            double hi = 2.0);

// Track seen in `n_f` distinct random frames of the horizon, redrawn until
// the landmark block is triangulable.
FeatureTrackd random_track(int id, int n_f, const PoseSequenced& poses,
                           const CameraRigd& rig, Rng& rng);

struct RandomInstance {
  HorizonPriord prior;
  PoseSequenced poses;
  CameraRigd rig;
  std::vector<FeatureTrackd> tracks;
  std::vector<FeatureInfod> infos;
  double sigma = 1.0;

  Objective objective() const { return Objective(prior.Hbar, infos, sigma); }
};

// `n` triangulable features with n_f drawn from [2, M + 1] over a random
// horizon prior.
RandomInstance random_instance(int n, int M, Rng& rng, double sigma = 1.0);

// A subset of B, e outside B, all drawn from `ids` (needs at least 1 id).
struct NestedTriple {
  std::vector<int> a;
  std::vector<int> b;
  int e;
};
NestedTriple random_nested_triple(std::span<const int> ids, Rng& rng);

}  // namespace featsel

#endif  // FEATSEL_RANDOM_INSTANCE_HPP_
