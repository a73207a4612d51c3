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

#include "featsel/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "featsel/errors.hpp"
#include "featsel/rng.hpp"

namespace featsel {
namespace {

using nlohmann::json;

constexpr const char* kCsvHeader =
    "algorithm,seed,q,epsilon,n,objective_value,measure_variance,"
    "measure_entropy,measure_spectral,eval_count,wall_time_s,selected_ids";

std::string join_ids(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ';';
    out += std::to_string(ids[i]);
  }
  return out;
}

BenchRow make_row(const SelectionResult& r, Algorithm a, std::uint64_t seed,
                  const ScenarioConfig& config, std::size_t n) {
  BenchRow row;
  row.algorithm = std::string(algorithm_name(a));
  row.seed = seed;
  row.q = config.q;
  row.epsilon = config.epsilon;
  row.n = n;
  row.objective_value = r.objective_value;
  row.measures = r.measures;
  row.eval_count = r.eval_count;
  row.wall_time_s = r.wall_time;
  row.selected_ids = r.selected;
  std::sort(row.selected_ids.begin(), row.selected_ids.end());
  return row;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round12(double v) { return std::strtod(format_real(v).c_str(), nullptr); }

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw ConfigError("unknown report format '" + std::string(name) +
                    "' (expected csv or json)");
}

SelectionResult run_algorithm(const Objective& obj, Algorithm algorithm,
                              int q, double epsilon, std::uint64_t seed,
                              const SelectionOptions& options) {
  switch (algorithm) {
    case Algorithm::kGreedy: return greedy(obj, q, options);
    case Algorithm::kStochastic:
      return stochastic_greedy(obj, q, epsilon, seed, options);
    case Algorithm::kSurrogate: return surrogate_greedy(obj, q);
    case Algorithm::kBrute: return brute_force(obj, q);
  }
  throw InvalidArgument("unknown algorithm");
}

BenchReport run_benchmark(const ScenarioConfig& config, int threads) {
  return run_benchmark(generate_scenario(config, config.placement_seed),
                       threads);
}

BenchReport run_benchmark(const Scenario& scenario, int threads) {
  const ScenarioConfig& config = scenario.config;
  const Objective obj = scenario.objective();
  const std::size_t n = obj.size();

  for (auto a : config.algorithms) {
    if (a != Algorithm::kBrute) continue;
    const auto count = binomial(n, static_cast<std::uint64_t>(config.q));
    if (count > kBruteForceLimit) {
      throw GuardRefusal("brute refused: C(" + std::to_string(n) + ", " +
                         std::to_string(config.q) + ") = " +
                         std::to_string(count) + " subsets exceeds the bound " +
                         std::to_string(kBruteForceLimit));
    }
  }

  BenchReport report;
  report.config_digest = config_digest(config);
  report.candidate_digest = scenario.candidate_digest();
  report.rng = std::string(Rng::kName);
  report.rejected = scenario.rejected;
  report.construction_time_s = scenario.construction_time;

  struct Job {
    Algorithm algorithm;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (auto a : config.algorithms) {
    for (auto s : config.seeds) jobs.push_back({a, s});
  }
  report.rows.resize(jobs.size());

  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < jobs.size();
         i = next.fetch_add(1)) {
      try {
        const auto result = run_algorithm(obj, jobs[i].algorithm, config.q,
                                          config.epsilon, jobs[i].seed);
        report.rows[i] =
            make_row(result, jobs[i].algorithm, jobs[i].seed, config, n);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1,
                              std::max<std::size_t>(jobs.size(), 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return report;
}

std::string report_csv(const BenchReport& report) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.algorithm << ',' << r.seed << ',' << r.q << ','
        << format_real(r.epsilon) << ',' << r.n << ','
        << format_real(r.objective_value) << ','
        << format_real(r.measures.variance) << ','
        << format_real(r.measures.entropy) << ','
        << format_real(r.measures.spectral) << ',' << r.eval_count << ','
        << format_real(r.wall_time_s) << ',' << join_ids(r.selected_ids) << '\n';
  }
  return out.str();
}

std::string report_json(const BenchReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({
        {"algorithm", r.algorithm},
        {"seed", r.seed},
        {"q", r.q},
        {"epsilon", round12(r.epsilon)},
        {"n", r.n},
        {"objective_value", round12(r.objective_value)},
        {"measure_variance", round12(r.measures.variance)},
        {"measure_entropy", round12(r.measures.entropy)},
        {"measure_spectral", round12(r.measures.spectral)},
        {"eval_count", r.eval_count},
        {"wall_time_s", round12(r.wall_time_s)},
        {"selected_ids", r.selected_ids},
    });
  }
  json rejected = json::array();
  for (const auto& x : report.rejected) {
    rejected.push_back({{"id", x.id}, {"n_f", x.n_f}, {"reason", x.reason}});
  }
  const json doc = {
      {"config_digest", report.config_digest},
      {"candidate_digest", report.candidate_digest},
      {"rng", report.rng},
      {"rejected", rejected},
      {"rows", rows},
  };
  return doc.dump(2) + "\n";
}

void emit_report(const BenchReport& report, ReportFormat format,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << (format == ReportFormat::kCsv ? report_csv(report) : report_json(report));
  out.flush();
  if (!out) throw Error("failed writing report to '" + path + "'");
}

BenchReport parse_report_json(std::string_view text) {
  const json doc = json::parse(text);
  BenchReport report;
  report.config_digest = doc.at("config_digest").get<std::string>();
  report.candidate_digest = doc.at("candidate_digest").get<std::string>();
  report.rng = doc.at("rng").get<std::string>();
  for (const auto& x : doc.at("rejected")) {
    report.rejected.push_back({x.at("id").get<int>(), x.at("n_f").get<int>(),
                               x.at("reason").get<std::string>()});
  }
  for (const auto& j : doc.at("rows")) {
    BenchRow r;
    r.algorithm = j.at("algorithm").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.q = j.at("q").get<int>();
    r.epsilon = j.at("epsilon").get<double>();
    r.n = j.at("n").get<std::size_t>();
    r.objective_value = j.at("objective_value").get<double>();
    r.measures.variance = j.at("measure_variance").get<double>();
    r.measures.entropy = j.at("measure_entropy").get<double>();
    r.measures.spectral = j.at("measure_spectral").get<double>();
    r.eval_count = j.at("eval_count").get<std::uint64_t>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    r.selected_ids = j.at("selected_ids").get<std::vector<int>>();
    report.rows.push_back(std::move(r));
  }
  return report;
}

}  // namespace featsel
