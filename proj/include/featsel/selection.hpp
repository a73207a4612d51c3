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

// Cardinality-constrained feature selection under the normalized log-det
// objective
//
//   rho(S) = log det(Hbar + sum_{f in S} H^f) - log det(Hbar),
//
// which is monotone and submodular with rho({}) = 0.
//
// All selectors break ties on the smallest feature id.

#ifndef FEATSEL_SELECTION_HPP_
#define FEATSEL_SELECTION_HPP_

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "featsel/numerics.hpp"
#include "featsel/vision.hpp"

namespace featsel {

// Scalar summaries of the posterior covariance H^-1 (smaller is better).
struct Measures {
  double variance = 0;  // tr(H^-1)
  double entropy = 0;   // -log det H
  double spectral = 0;  // lambda_min(H^-1) = 1 / lambda_max(H)
};

Measures evaluate_measures(const SymmetricMatrixd& h);

class Objective {
 public:
  // Candidates are stored sorted by id. Throws InvalidArgument on duplicate
  // ids or dimension mismatch, NotPositiveDefinite if `hbar` is not PD.
  Objective(SymmetricMatrixd hbar, std::vector<FeatureInfod> candidates,
            double sigma = 1.0);

  Objective(const Objective& other);
  Objective& operator=(const Objective& other);

  const SymmetricMatrixd& prior() const { return hbar_; }
  double prior_logdet() const { return prior_logdet_; }
  double sigma() const { return sigma_; }
  Index dim() const { return hbar_.dim(); }

  std::size_t size() const { return candidates_.size(); }
  std::span<const FeatureInfod> candidates() const { return candidates_; }
  std::vector<int> ids() const;
  bool contains(int id) const;
  // Throws InvalidArgument for an unknown id.
  const FeatureInfod& candidate(int id) const;

  // Hbar + sum of the listed candidates' information.
  SymmetricMatrixd information(std::span<const int> ids) const;

  // Cumulative number of marginal-gain evaluations against this objective.
  std::uint64_t eval_count() const { return evals_.load(); }
  void add_evals(std::uint64_t n) const { evals_.fetch_add(n); }
  void reset_eval_count() const { evals_.store(0); }

 private:
  SymmetricMatrixd hbar_;
  std::vector<FeatureInfod> candidates_;
  double sigma_;
  double prior_logdet_;
  mutable std::atomic<std::uint64_t> evals_{0};
};

struct SelectionResult {
  std::string algorithm;
  // In selection order.
  std::vector<int> selected;
  double objective_value = 0;
  Measures measures;
  // Marginal-gain evaluations for greedy variants, subsets scored for the
  // exhaustive search, score reads for the surrogate.
  std::uint64_t eval_count = 0;
  double wall_time = 0;
  std::optional<std::uint64_t> seed;
  // Budget exceeded the candidate count and was reduced.
  bool clamped = false;
};

struct SelectionOptions {
  // Worker threads for evaluating one round's marginal gains. The result is
  // bit-identical for any value.
  int threads = 1;
};

// Throws InvalidArgument for unknown or duplicate ids.
double rho(const Objective& obj, std::span<const int> subset);

// rho(S + f) - rho(S); counts one evaluation on `obj`.
double marginal_gain(const Objective& obj, std::span<const int> subset, int f);

SelectionResult greedy(const Objective& obj, int q,
                       const SelectionOptions& options = {});

// Per-round sample size ceil((n / q) ln(1 / epsilon)).
std::size_t stochastic_sample_size(std::size_t n, int q, double epsilon);

SelectionResult stochastic_greedy(const Objective& obj, int q, double epsilon,
                                  std::uint64_t seed,
                                  const SelectionOptions& options = {});

struct FrameScore {
  int id;
  int n_f;
};

// Top q of `scores` by (n_f descending, id ascending). Touches nothing but
// the scores.
std::vector<int> surrogate_select(std::span<const FrameScore> scores, int q);

// surrogate_select over the objective's candidates; objective value and
// measures are filled in afterwards from the chosen set.
SelectionResult surrogate_greedy(const Objective& obj, int q);

inline constexpr std::uint64_t kBruteForceLimit = 1'000'000;

// Saturates at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Exact maximizer over all size-q subsets; ties go to the lexicographically
// smallest id set. Throws GuardRefusal when C(n, q) exceeds `limit`.
SelectionResult brute_force(const Objective& obj, int q,
                            std::uint64_t limit = kBruteForceLimit);

}  // namespace featsel

#endif  // FEATSEL_SELECTION_HPP_
