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

#include "featsel/scenario.hpp"

#include <Eigen/Geometry>

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <set>
#include <sstream>

#include "featsel/errors.hpp"
#include "featsel/rng.hpp"

namespace featsel {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError(where + ": missing required key '" + key + "'");
  }
  return *it;
}

double read_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

int read_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

std::uint64_t read_u64(const json& j, const std::string& where) {
  if (!j.is_number_unsigned()) {
    throw ConfigError(where + ": expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

Vector3d read_vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(where + ": expected an array of 3 numbers");
  }
  return Vector3d(read_number(j[0], where), read_number(j[1], where),
                  read_number(j[2], where));
}

// A number s means s * I; otherwise a row-major 3x3 array.
Matrix3d read_mat3(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>() * Matrix3d::Identity();
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(where + ": expected a number or a 3x3 array");
  }
  Matrix3d m;
  for (int r = 0; r < 3; ++r) {
    const Vector3d row = read_vec3(j[r], where);
    m.row(r) = row.transpose();
  }
  return m;
}

json vec3_json(const Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json mat3_json(const Matrix3d& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r) out.push_back(vec3_json(m.row(r).transpose()));
  return out;
}

bool is_spd3(const Matrix3d& m) {
  if (!is_symmetric(m)) return false;
  Eigen::LLT<Matrix3d> llt(m);
  return llt.info() == Eigen::Success;
}

TrajectoryConfig parse_trajectory(const json& j) {
  const std::string where = "trajectory";
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const json& type = require(j, "type", where);
  if (!type.is_string()) throw ConfigError(where + ".type: expected a string");
  TrajectoryConfig t;
  const std::string kind = type.get<std::string>();
  if (kind == "line") {
    check_keys(j, {"type", "start", "step"}, where);
    t.kind = TrajectoryConfig::Kind::kLine;
    if (j.contains("start")) t.start = read_vec3(j["start"], where + ".start");
    if (j.contains("step")) t.step = read_vec3(j["step"], where + ".step");
  } else if (kind == "arc") {
    check_keys(j, {"type", "center", "radius", "start_angle", "step_angle"},
               where);
    t.kind = TrajectoryConfig::Kind::kArc;
    if (j.contains("center")) t.center = read_vec3(j["center"], where + ".center");
    t.radius = read_number(require(j, "radius", where), where + ".radius");
    if (j.contains("start_angle")) {
      t.start_angle = read_number(j["start_angle"], where + ".start_angle");
    }
    t.step_angle =
        read_number(require(j, "step_angle", where), where + ".step_angle");
  } else if (kind == "waypoints") {
    check_keys(j, {"type", "points"}, where);
    t.kind = TrajectoryConfig::Kind::kWaypoints;
    const json& pts = require(j, "points", where);
    if (!pts.is_array()) throw ConfigError(where + ".points: expected an array");
    for (const auto& p : pts) t.points.push_back(read_vec3(p, where + ".points"));
  } else {
    throw ConfigError(where + ".type: unknown trajectory '" + kind +
                      "' (expected line, arc or waypoints)");
  }
  return t;
}

json trajectory_json(const TrajectoryConfig& t) {
  switch (t.kind) {
    case TrajectoryConfig::Kind::kLine:
      return {{"type", "line"}, {"start", vec3_json(t.start)},
              {"step", vec3_json(t.step)}};
    case TrajectoryConfig::Kind::kArc:
      return {{"type", "arc"},
              {"center", vec3_json(t.center)},
              {"radius", t.radius},
              {"start_angle", t.start_angle},
              {"step_angle", t.step_angle}};
    case TrajectoryConfig::Kind::kWaypoints: {
      json pts = json::array();
      for (const auto& p : t.points) pts.push_back(vec3_json(p));
      return {{"type", "waypoints"}, {"points", pts}};
    }
  }
  return {};
}

Matrix3d yaw_rotation(double yaw) {
  return Eigen::AngleAxisd(yaw, Vector3d::UnitZ()).toRotationMatrix();
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kGreedy: return "greedy";
    case Algorithm::kStochastic: return "stochastic";
    case Algorithm::kSurrogate: return "surrogate";
    case Algorithm::kBrute: return "brute";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::kGreedy, Algorithm::kStochastic,
                 Algorithm::kSurrogate, Algorithm::kBrute}) {
    if (algorithm_name(a) == name) return a;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected greedy, stochastic, surrogate or brute)");
}

std::vector<Algorithm> parse_algorithm_list(std::string_view list) {
  std::vector<Algorithm> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    const auto item = list.substr(pos, comma - pos);
    if (!item.empty()) out.push_back(parse_algorithm(item));
    pos = comma + 1;
  }
  return out;
}

Matrix3d forward_camera_rotation() {
  Matrix3d r;
  r << 0, 0, 1,
      -1, 0, 0,
       0, -1, 0;
  return r;
}

void ScenarioConfig::validate() const {
  if (version != kConfigVersion) {
    throw ConfigError("unsupported config version " + std::to_string(version));
  }
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (trajectory.kind == TrajectoryConfig::Kind::kWaypoints &&
      trajectory.points.size() != static_cast<std::size_t>(horizon + 1)) {
    throw ConfigError("trajectory.points: need exactly horizon + 1 = " +
                      std::to_string(horizon + 1) + " waypoints");
  }
  if (trajectory.kind == TrajectoryConfig::Kind::kArc && !(trajectory.radius > 0)) {
    throw ConfigError("trajectory.radius must be positive");
  }
  if (!is_spd3(Lambda)) throw ConfigError("motion.Lambda must be symmetric PD");
  if (!is_spd3(Sigma0)) throw ConfigError("motion.Sigma0 must be symmetric PD");
  try {
    rig.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("rig: ") + e.what());
  }
  if (q < 1) throw ConfigError("q must be >= 1");
  if (feature_count < q) throw ConfigError("features.count must be >= q");
  if (!(epsilon > 0 && epsilon < 1)) throw ConfigError("epsilon must lie in (0, 1)");
  if (!(sigma > 0)) throw ConfigError("sigma must be positive");
  if (!((box_max - box_min).minCoeff() > 0)) {
    throw ConfigError("features box is degenerate (need box_min < box_max)");
  }
  std::set<Algorithm> seen;
  for (auto a : algorithms) {
    if (!seen.insert(a).second) {
      throw ConfigError("algorithms: duplicate '" +
                        std::string(algorithm_name(a)) + "'");
    }
  }
}

ScenarioConfig parse_config(const json& doc) {
  check_keys(doc,
             {"version", "rng", "horizon", "trajectory", "motion", "rig",
              "features", "sigma", "q", "epsilon", "seeds", "algorithms"},
             "config");
  ScenarioConfig c;
  c.version = read_int(require(doc, "version", "config"), "version");
  if (c.version != kConfigVersion) {
    throw ConfigError("unsupported config version " + std::to_string(c.version));
  }
  if (doc.contains("rng") && doc["rng"] != std::string(Rng::kName)) {
    throw ConfigError("rng: only '" + std::string(Rng::kName) + "' is supported");
  }
  c.horizon = read_int(require(doc, "horizon", "config"), "horizon");
  c.trajectory = parse_trajectory(require(doc, "trajectory", "config"));

  if (doc.contains("motion")) {
    const json& m = doc["motion"];
    check_keys(m, {"A", "Lambda", "Sigma0"}, "motion");
    if (m.contains("A")) c.A = read_mat3(m["A"], "motion.A");
    if (m.contains("Lambda")) c.Lambda = read_mat3(m["Lambda"], "motion.Lambda");
    if (m.contains("Sigma0")) c.Sigma0 = read_mat3(m["Sigma0"], "motion.Sigma0");
  }

  const json& rig = require(doc, "rig", "config");
  check_keys(rig, {"fov_half_angle", "max_range", "R_c", "x_c"}, "rig");
  c.rig.fov_half_angle =
      read_number(require(rig, "fov_half_angle", "rig"), "rig.fov_half_angle");
  c.rig.max_range = read_number(require(rig, "max_range", "rig"), "rig.max_range");
  c.rig.R_c = rig.contains("R_c") ? read_mat3(rig["R_c"], "rig.R_c")
                                  : forward_camera_rotation();
  if (rig.contains("x_c")) c.rig.x_c = read_vec3(rig["x_c"], "rig.x_c");

  const json& f = require(doc, "features", "config");
  check_keys(f, {"count", "box_min", "box_max", "seed"}, "features");
  c.feature_count = read_int(require(f, "count", "features"), "features.count");
  c.box_min = read_vec3(require(f, "box_min", "features"), "features.box_min");
  c.box_max = read_vec3(require(f, "box_max", "features"), "features.box_max");
  c.placement_seed = read_u64(require(f, "seed", "features"), "features.seed");

  c.sigma = read_number(require(doc, "sigma", "config"), "sigma");
  c.q = read_int(require(doc, "q", "config"), "q");
  c.epsilon = read_number(require(doc, "epsilon", "config"), "epsilon");

  const json& seeds = require(doc, "seeds", "config");
  if (!seeds.is_array()) throw ConfigError("seeds: expected an array");
  c.seeds.clear();
  for (const auto& s : seeds) c.seeds.push_back(read_u64(s, "seeds"));

  const json& algos = require(doc, "algorithms", "config");
  if (!algos.is_array()) throw ConfigError("algorithms: expected an array");
  c.algorithms.clear();
  for (const auto& a : algos) {
    if (!a.is_string()) throw ConfigError("algorithms: expected strings");
    c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
  }

  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json config_to_json(const ScenarioConfig& c) {
  json algos = json::array();
  for (auto a : c.algorithms) algos.push_back(std::string(algorithm_name(a)));
  return {
      {"version", c.version},
      {"rng", std::string(Rng::kName)},
      {"horizon", c.horizon},
      {"trajectory", trajectory_json(c.trajectory)},
      {"motion",
       {{"A", mat3_json(c.A)},
        {"Lambda", mat3_json(c.Lambda)},
        {"Sigma0", mat3_json(c.Sigma0)}}},
      {"rig",
       {{"fov_half_angle", c.rig.fov_half_angle},
        {"max_range", c.rig.max_range},
        {"R_c", mat3_json(c.rig.R_c)},
        {"x_c", vec3_json(c.rig.x_c)}}},
      {"features",
       {{"count", c.feature_count},
        {"box_min", vec3_json(c.box_min)},
        {"box_max", vec3_json(c.box_max)},
        {"seed", c.placement_seed}}},
      {"sigma", c.sigma},
      {"q", c.q},
      {"epsilon", c.epsilon},
      {"seeds", c.seeds},
      {"algorithms", algos},
  };
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::string config_digest(const ScenarioConfig& config) {
  return hex64(fnv1a(config_to_json(config).dump()));
}

PoseSequenced build_poses(const ScenarioConfig& config) {
  const auto& t = config.trajectory;
  const int M = config.horizon;
  PoseSequenced poses;
  switch (t.kind) {
    case TrajectoryConfig::Kind::kLine: {
      const double yaw = (t.step.x() == 0 && t.step.y() == 0)
                             ? 0.0
                             : std::atan2(t.step.y(), t.step.x());
      for (int k = 0; k <= M; ++k) {
        poses.positions.push_back(t.start + k * t.step);
        poses.rotations.push_back(yaw_rotation(yaw));
      }
      break;
    }
    case TrajectoryConfig::Kind::kArc: {
      const double turn = t.step_angle >= 0 ? std::numbers::pi / 2
                                            : -std::numbers::pi / 2;
      for (int k = 0; k <= M; ++k) {
        const double a = t.start_angle + k * t.step_angle;
        poses.positions.push_back(
            t.center + t.radius * Vector3d(std::cos(a), std::sin(a), 0));
        poses.rotations.push_back(yaw_rotation(a + turn));
      }
      break;
    }
    case TrajectoryConfig::Kind::kWaypoints: {
      double yaw = 0.0;
      for (int k = 0; k <= M; ++k) {
        const int next = k < M ? k + 1 : k;
        const int prev = k < M ? k : k - 1;
        const Vector3d d = t.points[next] - t.points[prev];
        if (d.x() != 0 || d.y() != 0) yaw = std::atan2(d.y(), d.x());
        poses.positions.push_back(t.points[k]);
        poses.rotations.push_back(yaw_rotation(yaw));
      }
      break;
    }
  }
  return poses;
}

std::string Scenario::candidate_digest() const {
  std::uint64_t h = fnv1a("");
  auto mix = [&h](const void* p, std::size_t n) {
    h = fnv1a(std::string_view(static_cast<const char*>(p), n), h);
  };
  for (const auto& c : candidates) {
    mix(&c.id, sizeof c.id);
    mix(&c.n_f, sizeof c.n_f);
    mix(c.H.matrix().data(),
        sizeof(double) * static_cast<std::size_t>(c.H.matrix().size()));
  }
  return hex64(h);
}

Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  Scenario s;
  s.config = config;
  s.config.placement_seed = seed;
  s.poses = build_poses(config);

  MotionModeld model;
  model.A = config.A;
  model.B = MatrixXd::Identity(3, 3);
  model.Lambda = SymmetricMatrixd(config.Lambda);
  std::vector<VectorXd> controls;
  for (int k = 1; k <= config.horizon; ++k) {
    controls.emplace_back(s.poses.positions[k] - config.A * s.poses.positions[k - 1]);
  }
  s.prior = propagate_prior<double>(model, s.poses.positions[0],
                                    SymmetricMatrixd(config.Sigma0), controls,
                                    config.horizon);

  Rng rng(seed);
  for (int id = 0; id < config.feature_count; ++id) {
    Vector3d y;
    for (int i = 0; i < 3; ++i) y(i) = rng.uniform(config.box_min(i), config.box_max(i));
    FeatureTrackd track;
    try {
      track = make_track(id, y, s.poses, config.rig);
    } catch (const DegenerateGeometry& e) {
      track.id = id;
      track.y = y;
      s.tracks.push_back(std::move(track));
      s.rejected.push_back({id, 0, e.what()});
      continue;
    }
    const int n_f = track.n_f();
    if (n_f < 2) {
      s.rejected.push_back(
          {id, n_f, "visible in " + std::to_string(n_f) + " frame(s); need 2"});
    } else {
      try {
        s.candidates.push_back(feature_information(track, config.sigma));
      } catch (const TriangulationFailure& e) {
        s.rejected.push_back({id, n_f, std::string("not triangulable: ") + e.what()});
      }
    }
    s.tracks.push_back(std::move(track));
  }
  s.construction_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (s.candidates.size() < static_cast<std::size_t>(config.q)) {
    throw ScenarioInfeasible(s.candidates.size(), static_cast<std::size_t>(config.q));
  }
  return s;
}

json scenario_to_json(const Scenario& s) {
  json features = json::array();
  std::size_t next_candidate = 0;
  std::size_t next_rejected = 0;
  for (const auto& t : s.tracks) {
    json f = {{"id", t.id}, {"position", vec3_json(t.y)}, {"n_f", t.n_f()},
              {"frames", t.frames}};
    if (next_candidate < s.candidates.size() &&
        s.candidates[next_candidate].id == t.id) {
      f["status"] = "candidate";
      f["trace"] = s.candidates[next_candidate].trace;
      ++next_candidate;
    } else if (next_rejected < s.rejected.size() &&
               s.rejected[next_rejected].id == t.id) {
      f["status"] = "rejected";
      f["reason"] = s.rejected[next_rejected].reason;
      ++next_rejected;
    }
    features.push_back(std::move(f));
  }
  return {
      {"config", config_to_json(s.config)},
      {"config_digest", config_digest(s.config)},
      {"candidate_digest", s.candidate_digest()},
      {"rng", std::string(Rng::kName)},
      {"state_dim", s.prior.dim()},
      {"candidates", s.candidates.size()},
      {"rejected", s.rejected.size()},
      {"features", features},
  };
}

}  // namespace featsel
