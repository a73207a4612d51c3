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

// Bearing-only camera model over a prediction horizon.
//
// A landmark y seen at frame k with unit bearing u (camera frame) contributes
// the linearized residual
//
//   z_k = U (R_k R_c)^T (x_k - y),        U = skew(u),
//
// so the stacked track is z = F x + E y with one 3-row block per visible
// frame: F carries U (R_k R_c)^T in column block k and E carries its negation.
// Marginalizing y out of the joint information gives the feature's
// information about the horizon states,
//
//   H = sigma^-2 (F^T F - F^T E (E^T E)^-1 E^T F),
//
// whose trace is always sigma^-2 (2 n_f - 3) for n_f visible frames.

#ifndef FEATSEL_VISION_HPP_
#define FEATSEL_VISION_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "featsel/errors.hpp"
#include "featsel/numerics.hpp"

namespace featsel {

template <typename Derived>
bool is_rotation(const Eigen::MatrixBase<Derived>& r, double tol = 1e-9) {
  using Scalar = typename Derived::Scalar;
  const Matrix3<Scalar> rr = r;
  return (rr.transpose() * rr - Matrix3<Scalar>::Identity())
                 .cwiseAbs()
                 .maxCoeff() <= tol &&
         std::abs(static_cast<double>(rr.determinant()) - 1.0) <= tol;
}

template <typename Scalar>
struct CameraRig {
  // Camera orientation in the body frame; column 2 is the boresight.
  Matrix3<Scalar> R_c = Matrix3<Scalar>::Identity();
  // Camera center in the body frame.
  Vector3<Scalar> x_c = Vector3<Scalar>::Zero();
  Scalar fov_half_angle = Scalar(0.5);
  Scalar max_range = Scalar(10);

  void validate() const {
    if (!is_rotation(R_c)) throw InvalidArgument("CameraRig: R_c not in SO(3)");
    if (!(fov_half_angle > 0 && fov_half_angle < Scalar(std::numbers::pi / 2))) {
      throw InvalidArgument("CameraRig: fov_half_angle must be in (0, pi/2)");
    }
    if (!(max_range > 0)) {
      throw InvalidArgument("CameraRig: max_range must be positive");
    }
  }
};

// Robot positions and body orientations for stamps 0..M.
template <typename Scalar>
struct PoseSequence {
  std::vector<Vector3<Scalar>> positions;
  std::vector<Matrix3<Scalar>> rotations;

  int M() const { return static_cast<int>(positions.size()) - 1; }

  void validate() const {
    if (positions.empty() || positions.size() != rotations.size()) {
      throw InvalidArgument("PoseSequence: positions/rotations mismatch");
    }
    for (const auto& r : rotations) {
      if (!is_rotation(r)) {
        throw InvalidArgument("PoseSequence: rotation not in SO(3)");
      }
    }
  }
};

template <typename Scalar>
struct Visibility {
  std::vector<int> frames;
  std::vector<Vector3<Scalar>> bearings;
};

template <typename Scalar>
struct FeatureTrack {
  int id = -1;
  Vector3<Scalar> y = Vector3<Scalar>::Zero();
  std::vector<int> frames;
  std::vector<Vector3<Scalar>> bearings;
  MatrixX<Scalar> F;  // (3 n_f) x 3(M + 1)
  MatrixX<Scalar> E;  // (3 n_f) x 3

  int n_f() const { return static_cast<int>(frames.size()); }
};

template <typename Scalar>
struct FeatureInfo {
  int id = -1;
  SymmetricMatrix<Scalar> H;
  int n_f = 0;
  // Computed from H, not from the frame-count shortcut.
  Scalar trace = 0;
};

template <typename Scalar>
struct MeasurementMatrices {
  MatrixX<Scalar> F;
  MatrixX<Scalar> E;
};

using CameraRigd = CameraRig<double>;
using PoseSequenced = PoseSequence<double>;
using Visibilityd = Visibility<double>;
using FeatureTrackd = FeatureTrack<double>;
using FeatureInfod = FeatureInfo<double>;

// World-frame orientation of the camera at frame k.
template <typename Scalar>
Matrix3<Scalar> camera_rotation(const PoseSequence<Scalar>& poses,
                                const CameraRig<Scalar>& rig, int k) {
  return poses.rotations[k] * rig.R_c;
}

template <typename Scalar>
Vector3<Scalar> camera_center(const PoseSequence<Scalar>& poses,
                              const CameraRig<Scalar>& rig, int k) {
  return poses.positions[k] + poses.rotations[k] * rig.x_c;
}

// Unit vector from the camera center to `y`, in the camera frame.
template <typename Scalar>
Vector3<Scalar> bearing_in_camera(const PoseSequence<Scalar>& poses,
                                  const CameraRig<Scalar>& rig, int k,
                                  const Vector3<Scalar>& y) {
  const Vector3<Scalar> d = y - camera_center(poses, rig, k);
  const Scalar dist = d.norm();
  if (!(dist >= Scalar(1e-9))) {
    throw DegenerateGeometry("feature coincides with the camera center at frame " +
                             std::to_string(k));
  }
  return camera_rotation(poses, rig, k).transpose() * (d / dist);
}

// Frames where `y` lies inside the camera's range ball and view cone.
template <typename Scalar>
Visibility<Scalar> simulate_visibility(const PoseSequence<Scalar>& poses,
                                       const CameraRig<Scalar>& rig,
                                       const Vector3<Scalar>& y) {
  Visibility<Scalar> vis;
  for (int k = 0; k <= poses.M(); ++k) {
    const Vector3<Scalar> u = bearing_in_camera(poses, rig, k, y);
    const Scalar dist = (y - camera_center(poses, rig, k)).norm();
    if (dist > rig.max_range) continue;
    // u is in the camera frame, so the boresight is e_z.
    const Scalar angle = std::acos(std::clamp(u.z(), Scalar(-1), Scalar(1)));
    if (angle > rig.fov_half_angle) continue;
    vis.frames.push_back(k);
    vis.bearings.push_back(u);
  }
  return vis;
}

template <typename Scalar>
MeasurementMatrices<Scalar> build_FE(std::span<const int> frames,
                                     std::span<const Vector3<Scalar>> bearings,
                                     const PoseSequence<Scalar>& poses,
                                     const CameraRig<Scalar>& rig, int M) {
  if (frames.size() != bearings.size()) {
    throw InvalidArgument("build_FE: frames and bearings differ in length");
  }
  if (frames.empty()) throw InvalidArgument("build_FE: no visible frames");
  const Index rows = 3 * static_cast<Index>(frames.size());
  MeasurementMatrices<Scalar> out{MatrixX<Scalar>::Zero(rows, 3 * (M + 1)),
                                  MatrixX<Scalar>::Zero(rows, 3)};
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const int k = frames[i];
    if (k < 0 || k > M || k > poses.M()) {
      throw InvalidArgument("build_FE: frame index outside the horizon");
    }
    const Matrix3<Scalar> block =
        skew(bearings[i]) * camera_rotation(poses, rig, k).transpose();
    out.F.template block<3, 3>(3 * i, 3 * k) = block;
    out.E.template block<3, 3>(3 * i, 0) = -block;
  }
  return out;
}

// Track for an explicit frame list; bearings come from the true geometry and
// no visibility gate is applied.
template <typename Scalar>
FeatureTrack<Scalar> track_from_frames(int id, const Vector3<Scalar>& y,
                                       std::vector<int> frames,
                                       const PoseSequence<Scalar>& poses,
                                       const CameraRig<Scalar>& rig) {
  FeatureTrack<Scalar> track;
  track.id = id;
  track.y = y;
  track.frames = std::move(frames);
  for (int k : track.frames) {
    track.bearings.push_back(bearing_in_camera(poses, rig, k, y));
  }
  if (!track.frames.empty()) {
    auto fe = build_FE<Scalar>(track.frames, track.bearings, poses, rig,
                               poses.M());
    track.F = std::move(fe.F);
    track.E = std::move(fe.E);
  }
  return track;
}

// Forward-simulates visibility over the horizon and assembles F and E.
// A feature seen in no frame gets empty F and E.
template <typename Scalar>
FeatureTrack<Scalar> make_track(int id, const Vector3<Scalar>& y,
                                const PoseSequence<Scalar>& poses,
                                const CameraRig<Scalar>& rig) {
  auto vis = simulate_visibility(poses, rig, y);
  return track_from_frames(id, y, std::move(vis.frames), poses, rig);
}

// Schur complement of the landmark block of the joint information. Throws
// TriangulationFailure when E^T E is singular or its condition number
// reaches kMaxCondition.
template <typename Scalar>
FeatureInfo<Scalar> feature_information(const MatrixX<Scalar>& F,
                                        const MatrixX<Scalar>& E,
                                        Scalar sigma, int id = -1) {
  if (!(sigma > 0)) throw InvalidArgument("feature_information: sigma <= 0");
  if (F.rows() != E.rows() || E.cols() != 3 || F.rows() % 3 != 0 ||
      F.rows() == 0) {
    throw InvalidArgument("feature_information: malformed F/E");
  }
  const MatrixX<Scalar> ft_e = F.transpose() * E;
  const MatrixX<Scalar> et_e = E.transpose() * E;
  MatrixX<Scalar> h = schur_complement(F.transpose() * F, ft_e, et_e);
  h /= sigma * sigma;

  FeatureInfo<Scalar> info;
  info.id = id;
  info.H = SymmetricMatrix<Scalar>::Symmetrized(h);
  info.n_f = static_cast<int>(F.rows() / 3);
  info.trace = info.H.trace();
  return info;
}

template <typename Scalar>
FeatureInfo<Scalar> feature_information(const FeatureTrack<Scalar>& track,
                                        Scalar sigma) {
  if (track.frames.empty()) {
    throw TriangulationFailure(std::numeric_limits<double>::infinity());
  }
  return feature_information(track.F, track.E, sigma, track.id);
}

// sigma^-2 (2 n_f - 3): the trace of H without forming it.
template <typename Scalar>
Scalar feature_trace_shortcut(int n_f, Scalar sigma) {
  if (n_f < 2) {
    throw InvalidArgument("feature_trace_shortcut: need at least two frames");
  }
  if (!(sigma > 0)) throw InvalidArgument("feature_trace_shortcut: sigma <= 0");
  return Scalar(2 * n_f - 3) / (sigma * sigma);
}

}  // namespace featsel

#endif  // FEATSEL_VISION_HPP_
