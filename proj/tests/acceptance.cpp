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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "featsel/bench.hpp"
#include "featsel/random_instance.hpp"
#include "featsel/selection.hpp"
#include "featsel/vision.hpp"
#include "oracles.hpp"

namespace featsel {
namespace {

using Clock = std::chrono::steady_clock;

constexpr double kGreedyRatio = 1.0 - 1.0 / std::numbers::e;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, const std::function<Outcome()>& run) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double t = seconds_since(start);
  std::printf("%s %s  %s: %s [%.2f s]\n", id, o.pass ? "PASS" : "FAIL", title,
              o.detail.c_str(), t);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<FeatureTrackd> random_tracks(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FeatureTrackd> tracks;
  for (int i = 0; i < count; ++i) {
    const int M = 3 + static_cast<int>(rng.uniform_index(18));
    const auto poses = random_poses(M, rng);
    const auto rig = random_rig(rng);
    const int n_f = 2 + static_cast<int>(rng.uniform_index(M));
    tracks.push_back(random_track(i, n_f, poses, rig, rng));
  }
  return tracks;
}

double oracle_rho(const Objective& obj, const std::vector<int>& ids) {
  MatrixXd h = obj.prior().matrix();
  for (int id : ids) h += obj.candidate(id).H.matrix();
  return oracle::log_det(h) - oracle::log_det(obj.prior().matrix());
}

double oracle_opt(const Objective& obj, int q) {
  const auto ids = obj.ids();
  double best = -1;
  oracle::for_each_subset(static_cast<int>(ids.size()), q, [&](const std::vector<int>& s) {
    std::vector<int> chosen;
    for (int i : s) chosen.push_back(ids[static_cast<std::size_t>(i)]);
    best = std::max(best, oracle_rho(obj, chosen));
  });
  return best;
}

Outcome ac1() {
  const auto start = Clock::now();
  double worst = 0;
  int bad = 0;
  for (const auto& t : random_tracks(500, 101)) {
    const auto info = feature_information(t, 1.0);
    const double expected = 2.0 * t.n_f() - 3;
    const double rel = std::abs(info.trace - expected) / expected;
    worst = std::max(worst, rel);
    if (rel > 1e-8) ++bad;
  }
  const double t = seconds_since(start);
  return {bad == 0 && t < 10.0,
          fmt("500 tracks, %d over 1e-8, worst rel err %.3g, %.2f s (limit 10 s)", bad,
              worst, t)};
}

Outcome ac2() {
  double worst = 0;
  int blocks = 0;
  for (const auto& t : random_tracks(500, 101)) {
    for (int i = 0; i < t.n_f(); ++i) {
      const Matrix3d Ei = t.E.block<3, 3>(3 * i, 0);
      const Matrix3d P = Ei.transpose() * Ei;
      worst = std::max(worst, (P * P - P).cwiseAbs().maxCoeff());
      ++blocks;
    }
  }
  return {worst <= 1e-10,
          fmt("%d blocks over 500 tracks, worst |P^2 - P| %.3g (limit 1e-10)", blocks, worst)};
}

Outcome ac3() {
  const auto start = Clock::now();
  Rng rng(303);
  int mono_bad = 0, sub_bad = 0, trials = 0;
  double mono_worst = 0, sub_worst = 0;
  while (trials < 1000) {
    const auto inst = random_instance(12, 5, rng);
    const auto obj = inst.objective();
    for (int k = 0; k < 50; ++k, ++trials) {
      const auto tr = random_nested_triple(obj.ids(), rng);
      auto ae = tr.a;
      ae.push_back(tr.e);
      auto be = tr.b;
      be.push_back(tr.e);
      const double ra = rho(obj, tr.a), rb = rho(obj, tr.b);
      const double mono = ra - rb;
      const double sub = (rho(obj, be) - rb) - (rho(obj, ae) - ra);
      mono_worst = std::max(mono_worst, mono);
      sub_worst = std::max(sub_worst, sub);
      if (mono > 1e-10) ++mono_bad;
      if (sub > 1e-10) ++sub_bad;
    }
  }
  const double t = seconds_since(start);
  return {mono_bad == 0 && sub_bad == 0 && t < 30.0,
          fmt("%d triples; monotonicity violations %d (worst %.3g), submodularity "
              "violations %d (worst %.3g), %.2f s (limit 30 s)",
              trials, mono_bad, mono_worst, sub_bad, sub_worst, t)};
}

Outcome ac4() {
  const auto start = Clock::now();
  Rng rng(404);
  int bad = 0;
  double min_ratio = 1;
  for (int i = 0; i < 50; ++i) {
    const auto obj = random_instance(10, 4, rng).objective();
    const double g = greedy(obj, 3).objective_value;
    const double b = brute_force(obj, 3).objective_value;
    if (std::abs(b - oracle_opt(obj, 3)) > 1e-9) ++bad;
    if (g < kGreedyRatio * b - 1e-9) ++bad;
    min_ratio = std::min(min_ratio, g / b);
  }
  const double t = seconds_since(start);
  return {bad == 0 && t < 60.0,
          fmt("50 instances, %d failures, min greedy/opt %.6f (bound %.6f), %.2f s", bad,
              min_ratio, kGreedyRatio, t)};
}

Outcome ac5() {
  const auto start = Clock::now();
  const double eps = 0.2;
  Rng rng(505);
  int bad = 0;
  double min_ratio = 1;
  for (int i = 0; i < 20; ++i) {
    const auto obj = random_instance(12, 4, rng).objective();
    const double opt = brute_force(obj, 3).objective_value;
    double sum = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
      sum += stochastic_greedy(obj, 3, eps, 1000 * i + s).objective_value;
    }
    const double mean = sum / 200;
    if (mean < (kGreedyRatio - eps) * opt) ++bad;
    min_ratio = std::min(min_ratio, mean / opt);
  }
  const double t = seconds_since(start);
  return {bad == 0 && t < 300.0,
          fmt("20 instances x 200 seeds, %d failures, min mean/opt %.6f (bound %.6f), "
              "%.2f s",
              bad, min_ratio, kGreedyRatio - eps, t)};
}

Outcome ac6() {
  Rng rng(606);
  int cases = 0, bad = 0;
  for (int n : {20, 57, 120, 200}) {
    const auto obj = random_instance(n, 2, rng).objective();
    for (int q : {1, 4, 10, 20}) {
      for (double eps : {0.01, 0.1, 0.2, 0.5, 0.9}) {
        ++cases;
        const auto g = greedy(obj, q);
        std::uint64_t greedy_expected = 0;
        for (int k = 0; k < q; ++k) greedy_expected += static_cast<std::uint64_t>(n - k);
        const double L = std::log(1.0 / eps);
        const auto s = static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) / q * L));
        std::uint64_t stoch_expected = 0;
        for (int k = 0; k < q; ++k) {
          stoch_expected += std::min<std::uint64_t>(s, static_cast<std::uint64_t>(n - k));
        }
        const auto bound = static_cast<std::uint64_t>(std::ceil(n * L)) + q;
        const auto st = stochastic_greedy(obj, q, eps, 7);
        if (g.eval_count != greedy_expected || st.eval_count != stoch_expected ||
            st.eval_count > bound) {
          ++bad;
        }
      }
    }
  }
  return {bad == 0, fmt("%d (n, q, eps) cases, %d counter mismatches", cases, bad)};
}

Outcome ac7() {
  Rng rng(707);
  int bad = 0, checked = 0;
  // Top-q by (n_f desc, id asc), via a full independent sort.
  auto expected_top = [](const Objective& obj, int q) {
    std::vector<std::pair<int, int>> keyed;
    for (const auto& c : obj.candidates()) keyed.push_back({-c.n_f, c.id});
    std::sort(keyed.begin(), keyed.end());
    std::vector<int> out;
    for (int i = 0; i < q && i < static_cast<int>(keyed.size()); ++i) {
      out.push_back(keyed[static_cast<std::size_t>(i)].second);
    }
    return out;
  };
  std::uint64_t logdet_evals = 0;
  for (int t = 0; t < 20; ++t) {
    const int n = 10 + static_cast<int>(rng.uniform_index(60));
    const auto obj = random_instance(n, 2 + static_cast<int>(rng.uniform_index(8)), rng)
                         .objective();
    const int q = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    obj.reset_eval_count();
    const auto r = surrogate_greedy(obj, q);
    logdet_evals += obj.eval_count();
    ++checked;
    if (r.selected != expected_top(obj, q)) ++bad;
  }

  const auto inst = random_instance(2000, 3, rng);
  const auto obj = inst.objective();
  obj.reset_eval_count();
  // Fastest of several surrogate runs against one greedy run.
  double surrogate_time = 1e9;
  for (int i = 0; i < 5; ++i) {
    const auto r = surrogate_greedy(obj, 50);
    surrogate_time = std::min(surrogate_time, r.wall_time);
    if (r.selected != expected_top(obj, 50)) ++bad;
  }
  ++checked;
  logdet_evals += obj.eval_count();
  const double greedy_time = greedy(obj, 50).wall_time;
  const double speedup = greedy_time / surrogate_time;
  return {bad == 0 && logdet_evals == 0 && speedup >= 100.0,
          fmt("%d scenarios, %d mismatches, %llu logdet evals; n=2000 q=50 greedy %.4f s "
              "vs surrogate %.2e s, speedup %.0fx (need 100x)",
              checked, bad, static_cast<unsigned long long>(logdet_evals), greedy_time,
              surrogate_time, speedup)};
}

Outcome ac8() {
  Rng rng(808);
  int bad = 0, runs = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = 8 + static_cast<int>(rng.uniform_index(10));
    const int q = 1 + static_cast<int>(rng.uniform_index(4));
    const auto obj = random_instance(n, 4, rng).objective();
    // ln(1/eps) = 40 makes s >= n for any q <= n.
    const double eps = std::exp(-40.0);
    if (stochastic_sample_size(obj.size(), q, eps) < obj.size()) ++bad;
    const auto g = greedy(obj, q);
    for (std::uint64_t seed : {0ULL, 1ULL, 12345ULL, 0xffffffffffffffffULL}) {
      ++runs;
      const auto s = stochastic_greedy(obj, q, eps, seed);
      if (s.selected != g.selected || s.objective_value != g.objective_value ||
          s.eval_count != g.eval_count || s.measures.variance != g.measures.variance ||
          s.measures.entropy != g.measures.entropy ||
          s.measures.spectral != g.measures.spectral) {
        ++bad;
      }
    }
  }
  return {bad == 0, fmt("20 instances, %d seeded runs, %d differ from greedy", runs, bad)};
}

Outcome ac9() {
  int bad_info = 0, bad_measures = 0;
  double worst_info = 0, worst_measures = 0;
  Rng rng(909);
  for (const auto& t : random_tracks(100, 910)) {
    const double sigma = rng.uniform(0.3, 3.0);
    const auto info = feature_information(t, sigma);
    const Index nx = t.F.cols();
    MatrixXd J(t.F.rows(), nx + 3);
    J << t.F, t.E;
    MatrixXd omega = J.transpose() * J / (sigma * sigma);
    omega.topLeftCorner(nx, nx) += MatrixXd::Identity(nx, nx);
    const MatrixXd cov = oracle::inverse(omega);
    const MatrixXd expected =
        oracle::inverse(cov.topLeftCorner(nx, nx)) - MatrixXd::Identity(nx, nx);
    const double err = (info.H.matrix() - expected).cwiseAbs().maxCoeff();
    worst_info = std::max(worst_info, err);
    if (err > 1e-8) ++bad_info;
  }
  for (int i = 0; i < 100; ++i) {
    const Index d = 3 + static_cast<Index>(rng.uniform_index(13));
    const auto h = random_spd(d, rng, 0.1, 10.0);
    const auto m = evaluate_measures(h);
    const MatrixXd cov = oracle::inverse(h.matrix());
    const double err = std::max(
        {std::abs(m.variance - cov.trace()),
         std::abs(m.entropy + oracle::log_det(h.matrix())),
         std::abs(m.spectral - oracle::jacobi_eigenvalues(cov).front())});
    worst_measures = std::max(worst_measures, err);
    if (err > 1e-9) ++bad_measures;
  }
  return {bad_info == 0 && bad_measures == 0,
          fmt("100 tracks worst |H - oracle| %.3g (limit 1e-8); 100 PD matrices worst "
              "measure err %.3g (limit 1e-9)",
              worst_info, worst_measures)};
}

Outcome ac10() {
  auto config = load_config(std::string(FEATSEL_CONFIG_DIR) + "/example.json");
  config.algorithms = {Algorithm::kGreedy, Algorithm::kStochastic, Algorithm::kSurrogate};
  config.seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  auto render = [&](int threads) {
    auto r = run_benchmark(config, threads);
    for (auto& row : r.rows) row.wall_time_s = 0;
    return report_csv(r) + report_json(r);
  };
  const std::string a = render(1), b = render(1), c = render(8), d = render(8);
  const bool same = a == b && a == c && a == d;
  return {same, fmt("%zu rows; runs at 1, 1, 8, 8 threads %s", config.algorithms.size() *
                                                                    config.seeds.size(),
                    same ? "identical" : "differ")};
}

}  // namespace
}  // namespace featsel

int main() {
  using namespace featsel;
  report("AC1", "trace identity", ac1);
  report("AC2", "per-frame projector", ac2);
  report("AC3", "monotone submodular objective", ac3);
  report("AC4", "greedy approximation ratio", ac4);
  report("AC5", "stochastic greedy expectation", ac5);
  report("AC6", "evaluation counts", ac6);
  report("AC7", "surrogate top-q, cost", ac7);
  report("AC8", "degenerate stochastic equals greedy", ac8);
  report("AC9", "numerics oracles", ac9);
  report("AC10", "bench determinism", ac10);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
