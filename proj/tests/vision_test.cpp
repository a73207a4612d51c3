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

#include "featsel/vision.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "featsel/random_instance.hpp"
#include "oracles.hpp"

namespace featsel {
namespace {

PoseSequenced static_poses(int M) {
  PoseSequenced poses;
  for (int k = 0; k <= M; ++k) {
    poses.positions.push_back(Vector3d(k, 0, 0));
    poses.rotations.push_back(Matrix3d::Identity());
  }
  return poses;
}

// Joint information of (x, y) with a unit prior on x only; returns the
// marginal information of x with the prior removed again.
MatrixXd joint_inverse_oracle(const FeatureTrackd& t, double sigma) {
  const Index nx = t.F.cols();
  MatrixXd J(t.F.rows(), nx + 3);
  J << t.F, t.E;
  MatrixXd omega = J.transpose() * J / (sigma * sigma);
  omega.topLeftCorner(nx, nx) += MatrixXd::Identity(nx, nx);
  const MatrixXd cov = oracle::inverse(omega);
  return oracle::inverse(cov.topLeftCorner(nx, nx)) - MatrixXd::Identity(nx, nx);
}

TEST(VisibilityTest, OnAxisFeatureHasBoresightBearing) {
  const auto poses = static_poses(0);
  CameraRigd rig;
  const auto vis = simulate_visibility<double>(poses, rig, Vector3d(0, 0, 5));
  ASSERT_EQ(vis.frames.size(), 1u);
  EXPECT_LE((vis.bearings[0] - Vector3d(0, 0, 1)).norm(), 1e-15);
}

TEST(VisibilityTest, BehindCameraAndOutOfRangeAreInvisible) {
  const auto poses = static_poses(0);
  CameraRigd rig;
  EXPECT_TRUE(simulate_visibility<double>(poses, rig, Vector3d(0, 0, -5)).frames.empty());
  EXPECT_TRUE(simulate_visibility<double>(poses, rig, Vector3d(0, 0, 50)).frames.empty());
  EXPECT_THROW(simulate_visibility<double>(poses, rig, Vector3d::Zero()), DegenerateGeometry);
}

TEST(VisibilityTest, MatchesIndependentGate) {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    const auto poses = random_poses(10, rng);
    const auto rig = random_rig(rng);
    for (int i = 0; i < 50; ++i) {
      const Vector3d y(rng.uniform(-15, 15), rng.uniform(-15, 15), rng.uniform(-15, 15));
      const auto vis = simulate_visibility(poses, rig, y);
      std::vector<int> expected;
      for (int k = 0; k <= poses.M(); ++k) {
        const Matrix3d Rw = poses.rotations[k] * rig.R_c;
        const Vector3d c = poses.positions[k] + poses.rotations[k] * rig.x_c;
        const Vector3d d = Rw.transpose() * (y - c);
        const double off_axis = std::atan2(std::hypot(d.x(), d.y()), d.z());
        if (d.norm() <= rig.max_range && off_axis <= rig.fov_half_angle) {
          expected.push_back(k);
        }
      }
      EXPECT_EQ(vis.frames, expected);
    }
  }
}

TEST(BuildFETest, SingleFrameBlocks) {
  const auto poses = static_poses(2);
  CameraRigd rig;
  const Vector3d u(0, 0, 1);
  const std::vector<int> frames = {1};
  const std::vector<Vector3d> bearings = {u};
  const auto fe = build_FE<double>(frames, bearings, poses, rig, 2);
  ASSERT_EQ(fe.F.rows(), 3);
  ASSERT_EQ(fe.F.cols(), 9);
  EXPECT_EQ(Matrix3d(fe.F.block(0, 3, 3, 3)), skew(u));
  EXPECT_TRUE(fe.F.block(0, 0, 3, 3).isZero());
  EXPECT_TRUE(fe.F.block(0, 6, 3, 3).isZero());
  EXPECT_EQ(Matrix3d(fe.E), Matrix3d(-skew(u)));
}

TEST(BuildFETest, RowBlocksHaveRankTwoAndZeroResidual) {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const auto poses = random_poses(6, rng);
    const auto rig = random_rig(rng);
    const auto track = random_track(t, 4, poses, rig, rng);
    // Stacked camera positions.
    VectorXd x(3 * (poses.M() + 1));
    for (int k = 0; k <= poses.M(); ++k) {
      x.segment<3>(3 * k) = camera_center(poses, rig, k);
    }
    for (int i = 0; i < track.n_f(); ++i) {
      const MatrixXd row = track.F.middleRows(3 * i, 3);
      Eigen::FullPivLU<MatrixXd> lu(row);
      EXPECT_EQ(lu.rank(), 2);
    }
    // Noiseless bearings satisfy F x + E y = 0 at the true camera centers.
    const VectorXd residual = track.F * x + track.E * track.y;
    EXPECT_LE(residual.cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, x.norm()));
  }
}

TEST(FeatureInformationTest, SingleFrameIsNotTriangulable) {
  const auto poses = static_poses(2);
  CameraRigd rig;
  const auto track = track_from_frames<double>(0, Vector3d(0, 0, 5), {0}, poses, rig);
  EXPECT_THROW(feature_information(track, 1.0), TriangulationFailure);
  FeatureTrackd empty;
  EXPECT_THROW(feature_information(empty, 1.0), TriangulationFailure);
}

TEST(FeatureInformationTest, OrthogonalBearingsHaveUnitTrace) {
  // Two frames viewing the point along x and along z.
  PoseSequenced poses;
  poses.positions = {Vector3d(0, 0, -1), Vector3d(-1, 0, 0)};
  Matrix3d r1;
  // Camera z axis along world +x.
  r1 << 0, 0, 1, 0, 1, 0, -1, 0, 0;
  poses.rotations = {Matrix3d::Identity(), r1};
  CameraRigd rig;
  const auto track = track_from_frames<double>(0, Vector3d::Zero(), {0, 1}, poses, rig);
  const auto info = feature_information(track, 1.0);
  EXPECT_NEAR(info.trace, 1.0, 1e-12);
}

TEST(FeatureInformationTest, MatchesJointInverseOracle) {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    const int M = 3 + static_cast<int>(rng.uniform_index(6));
    const auto poses = random_poses(M, rng);
    const auto rig = random_rig(rng);
    const int n_f = 2 + static_cast<int>(rng.uniform_index(M));
    const auto track = random_track(t, n_f, poses, rig, rng);
    const double sigma = rng.uniform(0.5, 2.0);
    const auto info = feature_information(track, sigma);
    const MatrixXd expected = joint_inverse_oracle(track, sigma);
    EXPECT_LE((info.H.matrix() - expected).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(FeatureInformationTest, TraceShortcut) {
  EXPECT_DOUBLE_EQ(feature_trace_shortcut(2, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(feature_trace_shortcut(5, 1.0), 7.0);
  EXPECT_DOUBLE_EQ(feature_trace_shortcut(4, 0.5), 20.0);
  EXPECT_THROW(feature_trace_shortcut(1, 1.0), InvalidArgument);
  EXPECT_THROW(feature_trace_shortcut(3, 0.0), InvalidArgument);

  Rng rng(6);
  const auto poses = random_poses(8, rng);
  const auto rig = random_rig(rng);
  const auto track = random_track(0, 4, poses, rig, rng);
  EXPECT_NEAR(feature_information(track, 0.5).trace, 20.0, 1e-8 * 20.0);
}

TEST(FeatureInformationTest, TraceIdentityProjectorAndPSD) {
  Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    const int M = 3 + static_cast<int>(rng.uniform_index(18));
    const auto poses = random_poses(M, rng);
    const auto rig = random_rig(rng);
    const int n_f = 2 + static_cast<int>(rng.uniform_index(M));
    const auto track = random_track(t, n_f, poses, rig, rng);
    const auto info = feature_information(track, 1.0);
    EXPECT_NEAR(info.trace, 2.0 * n_f - 3, 1e-8 * (2.0 * n_f - 3));
    for (int i = 0; i < n_f; ++i) {
      const Matrix3d Ei = track.E.block<3, 3>(3 * i, 0);
      const Matrix3d P = Ei.transpose() * Ei;
      EXPECT_LE((P * P - P).cwiseAbs().maxCoeff(), 1e-10);
    }
    const auto ext = eig_extremes(info.H);
    EXPECT_GE(ext.min, -1e-9);
  }
}

TEST(FeatureInformationTest, InvariantUnderWorldRotation) {
  Rng rng(29);
  for (int t = 0; t < 30; ++t) {
    const auto poses = random_poses(5, rng);
    const auto rig = random_rig(rng);
    const auto track = random_track(0, 3, poses, rig, rng);
    const Matrix3d R0 = random_rotation(rng);
    PoseSequenced rotated;
    for (int k = 0; k <= poses.M(); ++k) {
      rotated.positions.push_back(R0 * poses.positions[k]);
      rotated.rotations.push_back(R0 * poses.rotations[k]);
    }
    const auto moved = track_from_frames<double>(0, R0 * track.y, track.frames, rotated, rig);
    for (int i = 0; i < track.n_f(); ++i) {
      EXPECT_LE((moved.bearings[i] - track.bearings[i]).norm(), 1e-12);
    }
    // Rotating the world rotates every position block: H' = R H R^T.
    const Index d = track.F.cols();
    MatrixXd R = MatrixXd::Zero(d, d);
    for (Index k = 0; k < d / 3; ++k) R.block<3, 3>(3 * k, 3 * k) = R0;
    const MatrixXd expected = R * feature_information(track, 1.0).H.matrix() * R.transpose();
    const MatrixXd actual = feature_information(moved, 1.0).H.matrix();
    EXPECT_LE((actual - expected).cwiseAbs().maxCoeff(), 1e-9);
  }
}

}  // namespace
}  // namespace featsel
