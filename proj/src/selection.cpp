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

#include "featsel/selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>
#include <unordered_set>

#include "featsel/errors.hpp"
#include "featsel/rng.hpp"

namespace featsel {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_unique(std::span<const int> ids) {
  std::unordered_set<int> seen;
  for (int id : ids) {
    if (!seen.insert(id).second) {
      throw InvalidArgument("duplicate feature id " + std::to_string(id));
    }
  }
}

// Budget after clamping to the candidate count.
int clamp_budget(const Objective& obj, int q, SelectionResult& result) {
  if (q < 0) throw InvalidArgument("selection budget q must be non-negative");
  if (static_cast<std::size_t>(q) > obj.size()) {
    result.clamped = true;
    return static_cast<int>(obj.size());
  }
  return q;
}

void finish(const Objective& obj, SelectionResult& result) {
  const SymmetricMatrixd h = obj.information(result.selected);
  result.objective_value = cholesky_logdet(h) - obj.prior_logdet();
  result.measures = evaluate_measures(h);
}

// Running information matrix of a greedy pass and its log-determinant.
class GreedyState {
 public:
  explicit GreedyState(const Objective& obj)
      : obj_(obj),
        h_(obj.prior().matrix()),
        logdet_(obj.prior_logdet()) {}

  double gain(const FeatureInfod& c) const {
    return cholesky_logdet(h_ + c.H.matrix()) - logdet_;
  }

  // Gains of candidates at `positions` (indices into obj.candidates()).
  std::vector<double> gains(std::span<const std::size_t> positions,
                            int threads) const {
    std::vector<double> out(positions.size());
    const auto cands = obj_.candidates();
    const std::size_t workers = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::max(threads, 1)), 1, positions.size());
    if (workers <= 1) {
      for (std::size_t i = 0; i < positions.size(); ++i) {
        out[i] = gain(cands[positions[i]]);
      }
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t i = w; i < positions.size(); i += workers) {
            out[i] = gain(cands[positions[i]]);
          }
        });
      }
    }
    obj_.add_evals(positions.size());
    return out;
  }

  void add(const FeatureInfod& c) {
    h_ += c.H.matrix();
    logdet_ = cholesky_logdet(h_);
  }

 private:
  const Objective& obj_;
  MatrixXd h_;
  double logdet_;
};

// Position in `positions` of the largest gain; ties go to the smallest id.
std::size_t argmax_gain(const Objective& obj,
                        std::span<const std::size_t> positions,
                        std::span<const double> gains) {
  const auto cands = obj.candidates();
  std::size_t best = 0;
  for (std::size_t i = 1; i < positions.size(); ++i) {
    if (gains[i] > gains[best] ||
        (gains[i] == gains[best] &&
         cands[positions[i]].id < cands[positions[best]].id)) {
      best = i;
    }
  }
  return best;
}

}  // namespace

Measures evaluate_measures(const SymmetricMatrixd& h) {
  Measures m;
  m.entropy = -cholesky_logdet(h);
  m.variance = spd_inverse(h).trace();
  m.spectral = 1.0 / eig_extremes(h).max;
  return m;
}

Objective::Objective(SymmetricMatrixd hbar,
                     std::vector<FeatureInfod> candidates, double sigma)
    : hbar_(std::move(hbar)),
      candidates_(std::move(candidates)),
      sigma_(sigma),
      prior_logdet_(cholesky_logdet(hbar_)) {
  if (!(sigma > 0)) throw InvalidArgument("Objective: sigma must be positive");
  std::sort(candidates_.begin(), candidates_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    if (i > 0 && candidates_[i].id == candidates_[i - 1].id) {
      throw InvalidArgument("Objective: duplicate candidate id " +
                            std::to_string(candidates_[i].id));
    }
    if (candidates_[i].H.dim() != hbar_.dim()) {
      throw InvalidArgument("Objective: candidate " +
                            std::to_string(candidates_[i].id) +
                            " has the wrong dimension");
    }
  }
}

Objective::Objective(const Objective& other)
    : hbar_(other.hbar_),
      candidates_(other.candidates_),
      sigma_(other.sigma_),
      prior_logdet_(other.prior_logdet_),
      evals_(other.evals_.load()) {}

Objective& Objective::operator=(const Objective& other) {
  hbar_ = other.hbar_;
  candidates_ = other.candidates_;
  sigma_ = other.sigma_;
  prior_logdet_ = other.prior_logdet_;
  evals_.store(other.evals_.load());
  return *this;
}

std::vector<int> Objective::ids() const {
  std::vector<int> out;
  out.reserve(candidates_.size());
  for (const auto& c : candidates_) out.push_back(c.id);
  return out;
}

bool Objective::contains(int id) const {
  auto it = std::lower_bound(
      candidates_.begin(), candidates_.end(), id,
      [](const FeatureInfod& c, int v) { return c.id < v; });
  return it != candidates_.end() && it->id == id;
}

const FeatureInfod& Objective::candidate(int id) const {
  auto it = std::lower_bound(
      candidates_.begin(), candidates_.end(), id,
      [](const FeatureInfod& c, int v) { return c.id < v; });
  if (it == candidates_.end() || it->id != id) {
    throw InvalidArgument("unknown feature id " + std::to_string(id));
  }
  return *it;
}

SymmetricMatrixd Objective::information(std::span<const int> ids) const {
  SymmetricMatrixd h = hbar_;
  for (int id : ids) h += candidate(id).H;
  return h;
}

double rho(const Objective& obj, std::span<const int> subset) {
  check_unique(subset);
  return cholesky_logdet(obj.information(subset)) - obj.prior_logdet();
}

double marginal_gain(const Objective& obj, std::span<const int> subset,
                     int f) {
  if (std::find(subset.begin(), subset.end(), f) != subset.end()) {
    throw InvalidArgument("feature " + std::to_string(f) +
                          " is already in the set");
  }
  (void)obj.candidate(f);
  check_unique(subset);
  const SymmetricMatrixd base = obj.information(subset);
  const SymmetricMatrixd with = base + obj.candidate(f).H;
  obj.add_evals(1);
  return cholesky_logdet(with) - cholesky_logdet(base);
}

SelectionResult greedy(const Objective& obj, int q,
                       const SelectionOptions& options) {
  SelectionResult result;
  result.algorithm = "greedy";
  const int budget = clamp_budget(obj, q, result);

  const auto start = Clock::now();
  GreedyState state(obj);
  std::vector<std::size_t> remaining(obj.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
  for (int round = 0; round < budget; ++round) {
    const auto gains = state.gains(remaining, options.threads);
    result.eval_count += remaining.size();
    const std::size_t best = argmax_gain(obj, remaining, gains);
    const FeatureInfod& chosen = obj.candidates()[remaining[best]];
    result.selected.push_back(chosen.id);
    state.add(chosen);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  result.wall_time = seconds_since(start);
  finish(obj, result);
  return result;
}

std::size_t stochastic_sample_size(std::size_t n, int q, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidArgument("epsilon must lie in (0, 1)");
  }
  if (q < 1) throw InvalidArgument("stochastic greedy needs q >= 1");
  const double s = std::ceil(static_cast<double>(n) / q * std::log(1.0 / epsilon));
  return static_cast<std::size_t>(s);
}

SelectionResult stochastic_greedy(const Objective& obj, int q, double epsilon,
                                  std::uint64_t seed,
                                  const SelectionOptions& options) {
  SelectionResult result;
  result.algorithm = "stochastic";
  result.seed = seed;
  if (q < 1) throw InvalidArgument("stochastic greedy needs q >= 1");
  const int budget = clamp_budget(obj, q, result);
  const std::size_t s = stochastic_sample_size(obj.size(), budget, epsilon);

  const auto start = Clock::now();
  Rng rng(seed);
  GreedyState state(obj);
  // Kept in ascending position (= ascending id) order so draws depend only
  // on the seed and the remaining set.
  std::vector<std::size_t> remaining(obj.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
  for (int round = 0; round < budget; ++round) {
    const auto sample = sample_without_replacement<std::size_t>(remaining, s, rng);
    const auto gains = state.gains(sample, options.threads);
    result.eval_count += sample.size();
    const std::size_t pos = sample[argmax_gain(obj, sample, gains)];
    const FeatureInfod& chosen = obj.candidates()[pos];
    result.selected.push_back(chosen.id);
    state.add(chosen);
    remaining.erase(std::find(remaining.begin(), remaining.end(), pos));
  }
  result.wall_time = seconds_since(start);
  finish(obj, result);
  return result;
}

std::vector<int> surrogate_select(std::span<const FrameScore> scores, int q) {
  if (q < 0) throw InvalidArgument("selection budget q must be non-negative");
  std::vector<FrameScore> sorted(scores.begin(), scores.end());
  const std::size_t take = std::min(sorted.size(), static_cast<std::size_t>(q));
  std::partial_sort(sorted.begin(), sorted.begin() + take, sorted.end(),
                    [](const FrameScore& a, const FrameScore& b) {
                      return a.n_f != b.n_f ? a.n_f > b.n_f : a.id < b.id;
                    });
  std::vector<int> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(sorted[i].id);
  return out;
}

SelectionResult surrogate_greedy(const Objective& obj, int q) {
  SelectionResult result;
  result.algorithm = "surrogate";
  const int budget = clamp_budget(obj, q, result);

  const auto start = Clock::now();
  std::vector<FrameScore> scores;
  scores.reserve(obj.size());
  for (const auto& c : obj.candidates()) scores.push_back({c.id, c.n_f});
  result.selected = surrogate_select(scores, budget);
  result.eval_count = scores.size();
  result.wall_time = seconds_since(start);
  finish(obj, result);
  return result;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // c * (n - k + i) / i is exact at every step.
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(c, i);
    const std::uint64_t c_red = c / g;
    const std::uint64_t num_red = num / (i / g);
    if (c_red > kMax / num_red) return kMax;
    c = c_red * num_red;
  }
  return c;
}

SelectionResult brute_force(const Objective& obj, int q, std::uint64_t limit) {
  SelectionResult result;
  result.algorithm = "brute";
  const int budget = clamp_budget(obj, q, result);
  const std::size_t n = obj.size();
  const std::uint64_t count = binomial(n, static_cast<std::uint64_t>(budget));
  if (count > limit) {
    throw GuardRefusal("exhaustive search refused: C(" + std::to_string(n) +
                       ", " + std::to_string(budget) + ") = " +
                       std::to_string(count) + " subsets exceeds the bound " +
                       std::to_string(limit));
  }

  const auto start = Clock::now();
  const auto cands = obj.candidates();
  std::vector<std::size_t> idx(static_cast<std::size_t>(budget));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_idx;
  MatrixXd h(obj.dim(), obj.dim());
  for (;;) {
    h = obj.prior().matrix();
    for (std::size_t i : idx) h += cands[i].H.matrix();
    const double value = cholesky_logdet(h) - obj.prior_logdet();
    ++result.eval_count;
    // Lexicographic enumeration: strict > keeps the smallest id set on ties.
    if (value > best) {
      best = value;
      best_idx = idx;
    }
    // Advance to the next combination.
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(idx.size()) - 1;
    while (i >= 0 && idx[i] == n - idx.size() + static_cast<std::size_t>(i)) --i;
    if (i < 0) break;
    ++idx[i];
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < idx.size(); ++j) {
      idx[j] = idx[j - 1] + 1;
    }
  }
  for (std::size_t i : best_idx) result.selected.push_back(cands[i].id);
  result.wall_time = seconds_since(start);
  finish(obj, result);
  return result;
}

}  // namespace featsel
