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

#ifndef FEATSEL_BENCH_HPP_
#define FEATSEL_BENCH_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "featsel/scenario.hpp"
#include "featsel/selection.hpp"

namespace featsel {

struct BenchRow {
  std::string algorithm;
  std::uint64_t seed = 0;
  int q = 0;
  double epsilon = 0;
  std::size_t n = 0;
  double objective_value = 0;
  Measures measures;
  std::uint64_t eval_count = 0;
  double wall_time_s = 0;
  std::vector<int> selected_ids;  // ascending
};

struct BenchReport {
  std::string config_digest;
  std::string candidate_digest;
  std::string rng;
  std::vector<Rejection> rejected;
  // One row per (algorithm, seed), algorithms outer, in config order.
  std::vector<BenchRow> rows;
  // Scenario construction (not part of the emitted report).
  double construction_time_s = 0;
};

enum class ReportFormat { kCsv, kJson };

// Throws ConfigError for anything but "csv" or "json".
ReportFormat parse_report_format(std::string_view name);

// Runs one algorithm; `seed` only matters for the stochastic selector.
SelectionResult run_algorithm(const Objective& obj, Algorithm algorithm,
                              int q, double epsilon, std::uint64_t seed,
                              const SelectionOptions& options = {});

// Fans (algorithm, seed) jobs over `threads` workers against one shared
// scenario. Output is identical for any thread count apart from wall times.
// Throws GuardRefusal before running anything if brute is requested on an
// instance with more than kBruteForceLimit subsets.
BenchReport run_benchmark(const ScenarioConfig& config, int threads = 1);
BenchReport run_benchmark(const Scenario& scenario, int threads = 1);

// Fixed column order:
// algorithm,seed,q,epsilon,n,objective_value,measure_variance,
// measure_entropy,measure_spectral,eval_count,wall_time_s,selected_ids
std::string report_csv(const BenchReport& report);
std::string report_json(const BenchReport& report);
// Throws Error when the file cannot be written.
void emit_report(const BenchReport& report, ReportFormat format,
                 const std::string& path);

BenchReport parse_report_json(std::string_view text);

// printf("%.12g").
std::string format_real(double v);
// `v` rounded to 12 significant digits.
double round12(double v);

}  // namespace featsel

#endif  // FEATSEL_BENCH_HPP_
