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

#include "featsel/random_instance.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <numeric>

namespace featsel {

Matrix3d random_rotation(Rng& rng) {
  Eigen::Quaterniond q;
  do {
    q = Eigen::Quaterniond(rng.normal(), rng.normal(), rng.normal(),
                           rng.normal());
  } while (q.norm() < 1e-6);
  return q.normalized().toRotationMatrix();
}

Vector3d random_unit_vector(Rng& rng) {
  Vector3d v;
  do {
    v = Vector3d(rng.normal(), rng.normal(), rng.normal());
  } while (v.norm() < 1e-6);
  return v.normalized();
}

PoseSequenced random_poses(int M, Rng& rng) {
  PoseSequenced poses;
  Vector3d p = Vector3d::Zero();
  for (int k = 0; k <= M; ++k) {
    poses.positions.push_back(p);
    poses.rotations.push_back(random_rotation(rng));
    p += Vector3d(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
  }
  return poses;
}

CameraRigd random_rig(Rng& rng) {
  CameraRigd rig;
  rig.R_c = random_rotation(rng);
  rig.x_c = Vector3d(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2),
                     rng.uniform(-0.2, 0.2));
  rig.fov_half_angle = 0.6;
  rig.max_range = 20.0;
  return rig;
}

SymmetricMatrixd random_spd(Index dim, Rng& rng, double lo, double hi) {
  MatrixXd g(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<MatrixXd> qr(g);
  const MatrixXd q = qr.householderQ();
  VectorXd ev(dim);
  for (Index i = 0; i < dim; ++i) ev(i) = rng.uniform(lo, hi);
  return SymmetricMatrixd::Symmetrized(q * ev.asDiagonal() * q.transpose());
}

FeatureTrackd random_track(int id, int n_f, const PoseSequenced& poses,
                           const CameraRigd& rig, Rng& rng) {
  std::vector<int> all(static_cast<std::size_t>(poses.M() + 1));
  std::iota(all.begin(), all.end(), 0);
  for (;;) {
    auto frames = sample_without_replacement<int>(all, n_f, rng);
    std::sort(frames.begin(), frames.end());
    const Vector3d y(rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(-6, 6));
    try {
      auto track = track_from_frames(id, y, std::move(frames), poses, rig);
      if (spd_condition(track.E.transpose() * track.E) < kMaxCondition) {
        return track;
      }
    } catch (const DegenerateGeometry&) {
    }
  }
}

RandomInstance random_instance(int n, int M, Rng& rng, double sigma) {
  RandomInstance inst;
  inst.sigma = sigma;
  inst.poses = random_poses(M, rng);
  inst.rig = random_rig(rng);

  MotionModeld model;
  model.A = rng.uniform(0.5, 1.0) * Matrix3d::Identity();
  model.Lambda = random_spd(3, rng, 0.2, 1.0);
  const SymmetricMatrixd sigma0 = random_spd(3, rng, 0.5, 2.0);
  const std::vector<VectorXd> controls(static_cast<std::size_t>(M));
  inst.prior = propagate_prior<double>(model, inst.poses.positions[0], sigma0,
                                       controls, M);

  for (int id = 0; id < n; ++id) {
    const int n_f = 2 + static_cast<int>(rng.uniform_index(M));
    inst.tracks.push_back(random_track(id, n_f, inst.poses, inst.rig, rng));
    inst.infos.push_back(feature_information(inst.tracks.back(), sigma));
  }
  return inst;
}

NestedTriple random_nested_triple(std::span<const int> ids, Rng& rng) {
  if (ids.empty()) throw InvalidArgument("random_nested_triple: no ids");
  auto order = sample_without_replacement<int>(ids, ids.size(), rng);
  NestedTriple t;
  t.e = order.back();
  order.pop_back();
  const std::size_t b_size = rng.uniform_index(order.size() + 1);
  t.b.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(b_size));
  const std::size_t a_size = rng.uniform_index(b_size + 1);
  t.a.assign(t.b.begin(), t.b.begin() + static_cast<std::ptrdiff_t>(a_size));
  return t;
}

}  // namespace featsel
