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

// Benchmark scenario configuration and generation.
//
// Configs are JSON documents with a `version` field; unknown keys are
// rejected. See README.md for the schema.

#ifndef FEATSEL_SCENARIO_HPP_
#define FEATSEL_SCENARIO_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "featsel/motion.hpp"
#include "featsel/selection.hpp"
#include "featsel/vision.hpp"

namespace featsel {

inline constexpr int kConfigVersion = 1;

enum class Algorithm { kGreedy, kStochastic, kSurrogate, kBrute };

std::string_view algorithm_name(Algorithm a);
// Throws ConfigError for an unknown name.
Algorithm parse_algorithm(std::string_view name);
// Comma-separated list, e.g. "greedy,stochastic".
std::vector<Algorithm> parse_algorithm_list(std::string_view list);

struct TrajectoryConfig {
  enum class Kind { kLine, kArc, kWaypoints };
  Kind kind = Kind::kLine;
  // line
  Vector3d start = Vector3d::Zero();
  Vector3d step = Vector3d(1, 0, 0);
  // arc
  Vector3d center = Vector3d::Zero();
  double radius = 10.0;
  double start_angle = 0.0;
  double step_angle = 0.1;
  // waypoints; exactly M + 1 points
  std::vector<Vector3d> points;
};

struct ScenarioConfig {
  int version = kConfigVersion;
  int horizon = 10;
  TrajectoryConfig trajectory;
  // Motion: x_k = A x_{k-1} + u_k + w_k with controls chosen so the mean
  // follows the trajectory.
  Matrix3d A = Matrix3d::Identity();
  Matrix3d Lambda = 0.01 * Matrix3d::Identity();
  Matrix3d Sigma0 = 0.01 * Matrix3d::Identity();
  CameraRigd rig;
  int feature_count = 100;
  Vector3d box_min = Vector3d(0, -10, -3);
  Vector3d box_max = Vector3d(30, 10, 3);
  std::uint64_t placement_seed = 0;
  double sigma = 1.0;
  int q = 10;
  double epsilon = 0.1;
  std::vector<std::uint64_t> seeds = {0};
  std::vector<Algorithm> algorithms = {Algorithm::kGreedy,
                                       Algorithm::kStochastic,
                                       Algorithm::kSurrogate};

  // Throws ConfigError on violated invariants.
  void validate() const;
};

// Forward-looking camera: optical axis along body x, image x along body -y.
Matrix3d forward_camera_rotation();

// Strict parse; throws ConfigError.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::string& path);

// Fully resolved config (defaults filled in) plus the generator name.
nlohmann::json config_to_json(const ScenarioConfig& config);
// 64-bit FNV-1a of the resolved config, as 16 hex digits.
std::string config_digest(const ScenarioConfig& config);

std::uint64_t fnv1a(std::string_view bytes,
                    std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

PoseSequenced build_poses(const ScenarioConfig& config);

struct Rejection {
  int id;
  int n_f;
  std::string reason;
};

struct Scenario {
  ScenarioConfig config;
  PoseSequenced poses;
  HorizonPriord prior;
  // Every sampled feature, including rejected ones.
  std::vector<FeatureTrackd> tracks;
  std::vector<FeatureInfod> candidates;
  std::vector<Rejection> rejected;
  double construction_time = 0;

  Objective objective() const {
    return Objective(prior.Hbar, candidates, config.sigma);
  }
  // Digest over candidate ids, frame counts and information matrices.
  std::string candidate_digest() const;
};

// Deterministic given (config, seed); `seed` drives feature placement.
// Throws ScenarioInfeasible when fewer than q features are triangulable.
Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed);

// Resolved config, digests and per-feature summaries.
nlohmann::json scenario_to_json(const Scenario& scenario);

}  // namespace featsel

#endif  // FEATSEL_SCENARIO_HPP_
