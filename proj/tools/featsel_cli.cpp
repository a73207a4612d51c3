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

// featsel: scenario generation, selection and benchmarking.
//
// Exit codes: 0 success, 1 verification failure or other error,
// 2 config/usage error, 3 infeasible scenario, 4 oversized brute refused.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "featsel/bench.hpp"
#include "featsel/errors.hpp"
#include "featsel/scenario.hpp"
#include "featsel/selection.hpp"
#include "featsel/verify.hpp"

namespace {

using nlohmann::json;
using namespace featsel;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kInfeasible = 3,
  kGuardRefusal = 4,
};

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

json result_json(const SelectionResult& r) {
  json j = {
      {"algorithm", r.algorithm},
      {"selected", r.selected},
      {"objective_value", round12(r.objective_value)},
      {"measures",
       {{"variance", round12(r.measures.variance)},
        {"entropy", round12(r.measures.entropy)},
        {"spectral", round12(r.measures.spectral)}}},
      {"eval_count", r.eval_count},
      {"wall_time_s", round12(r.wall_time)},
      {"clamped", r.clamped},
  };
  j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-driven visual feature selection"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::string algos;
  std::optional<std::uint64_t> seed;
  int threads = 1;

  auto* gen = app.add_subcommand("gen", "Emit the resolved scenario and digests");
  gen->add_option("--config", config_path, "Scenario config (JSON)")->required();
  gen->add_option("--seed", seed, "Feature placement seed (overrides config)");
  gen->add_option("--out", out_path, "Output path (default stdout)");

  auto* select = app.add_subcommand("select", "Run one selector once");
  select->add_option("--config", config_path, "Scenario config (JSON)")->required();
  select->add_option("--seed", seed, "Sampling seed (default: first config seed)");
  select->add_option("--algos", algos, "Algorithm (default: first in config)");
  select->add_option("--threads", threads, "Gain-evaluation threads")
      ->check(CLI::PositiveNumber);
  select->add_option("--out", out_path, "Output path (default stdout)");

  auto* bench = app.add_subcommand("bench", "Run every algorithm x seed");
  bench->add_option("--config", config_path, "Scenario config (JSON)")->required();
  bench->add_option("--seed", seed, "Run this single seed instead of the config's");
  bench->add_option("--algos", algos, "Comma-separated algorithms (overrides config)");
  bench->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--threads", threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", out_path, "Output path (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run the randomized property suites");
  verify->add_option("--seed", seed, "Seed for the random instances");
  verify->add_option("--threads", threads, "Unused; accepted for symmetry")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*verify) {
      VerifyOptions options;
      if (seed) options.seed = *seed;
      bool ok = true;
      for (const auto& c : run_verify(options)) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  trials="
                  << c.trials << " violations=" << c.violations
                  << " worst_excess=" << format_real(c.worst) << '\n';
        ok = ok && c.passed;
      }
      return ok ? kOk : kFailure;
    }

    ScenarioConfig config = load_config(config_path);

    if (*gen) {
      const auto scenario =
          generate_scenario(config, seed.value_or(config.placement_seed));
      std::cerr << "construction_time_s " << format_real(scenario.construction_time)
                << '\n';
      write_output(scenario_to_json(scenario).dump(2) + "\n", out_path);
      return kOk;
    }

    if (*select) {
      Algorithm algorithm = config.algorithms.empty() ? Algorithm::kGreedy
                                                      : config.algorithms.front();
      if (!algos.empty()) {
        const auto list = parse_algorithm_list(algos);
        if (list.size() != 1) throw ConfigError("select takes exactly one algorithm");
        algorithm = list.front();
      }
      const std::uint64_t s =
          seed.value_or(config.seeds.empty() ? 0 : config.seeds.front());
      const auto scenario = generate_scenario(config, config.placement_seed);
      const auto objective = scenario.objective();
      const auto result = run_algorithm(objective, algorithm, config.q,
                                        config.epsilon, s, {threads});
      json j = result_json(result);
      j["config_digest"] = config_digest(scenario.config);
      j["candidate_digest"] = scenario.candidate_digest();
      write_output(j.dump(2) + "\n", out_path);
      return kOk;
    }

    if (*bench) {
      if (!algos.empty()) config.algorithms = parse_algorithm_list(algos);
      if (seed) config.seeds = {*seed};
      config.validate();
      const auto report = run_benchmark(config, threads);
      std::cerr << "construction_time_s " << format_real(report.construction_time_s)
                << " rows " << report.rows.size() << " rejected_features "
                << report.rejected.size() << '\n';
      const auto fmt = parse_report_format(format);
      if (out_path.empty() || out_path == "-") {
        std::cout << (fmt == ReportFormat::kCsv ? report_csv(report)
                                                : report_json(report));
      } else {
        emit_report(report, fmt, out_path);
      }
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ScenarioInfeasible& e) {
    std::cerr << e.what() << '\n';
    return kInfeasible;
  } catch (const GuardRefusal& e) {
    std::cerr << e.what() << '\n';
    return kGuardRefusal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
