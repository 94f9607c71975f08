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

// Experiment orchestration: budget sweeps of the pure-sponsoring policies
// and the cache-paradigm comparison, plus CSV reporting.

#ifndef EDGESPONSOR_HARNESS_HPP_
#define EDGESPONSOR_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edgesponsor/model.hpp"
#include "edgesponsor/online.hpp"
#include "edgesponsor/workload.hpp"

namespace edgesponsor {

struct WorkloadSpec {
  enum class Kind { iid, markov };
  Kind kind = Kind::iid;
  ZipfProfileSpec profile;
  int horizon = 2000;
  // markov only: the evaluated day is drawn from the kernel given the
  // counts of an i.i.d. day generated from `profile`.
  KernelFamily family = KernelFamily::poisson_drift;
  double rho = 1.0;
  double lambda = 0.0;
  double sigma = 1.0;
  int support_cap = 0;  // 0 picks 2 * (largest base count) + 50
};

struct ExperimentConfig {
  std::string name = "desk";
  WorkloadSpec workload;
  CatalogSpec catalog;
  std::uint64_t catalog_seed = 7;
  std::vector<Money> budgets;
  std::optional<Factor> phi;  // unset: default_phi(catalog)
  std::vector<Factor> phi_grid;
  std::vector<Policy> policies;
  double low_error_sigma = 0.1;
  double high_error_sigma = 0.8;
  bool estimated_arm = false;  // add a plan from the scenario's own estimator
  std::vector<std::uint64_t> seeds;
  BudgetMode budget_mode = BudgetMode::hard;
  bool run_budget_sweep = true;
  bool run_paradigms = true;
  bool persist_runs = false;
  int threads = 0;  // 0: hardware concurrency
  std::filesystem::path output_dir = "out";

  // Desk-scale defaults: 200 users, 500 contents, 50 locations, 2000
  // slots, 20 seeds.
  static ExperimentConfig defaults();
  void validate() const;
  Factor primary_phi(const Catalog& catalog) const;
};

// JSON object; unknown keys are rejected. See README for the schema.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& json_text);

struct MetricsRow {
  std::string experiment;  // "budget_sweep" or "paradigms"
  std::string arm;         // offline, greedy, avg_greedy, lyapunov, no_cache, ...
  std::string policy;
  Money budget;
  std::optional<Factor> phi;
  std::uint64_t seed = 0;
  double payoff = 0;  // time-average payoff
  Money spend;        // cellular cost + gamma
  Money gamma;
  double sponsored_fraction = 0;
  double offline_objective = 0;  // time-average offline benchmark
  std::optional<double> payoff_ratio;  // payoff / offline when offline > 0
  std::optional<double> pure_ratio;    // payoff / no-cache payoff (paradigms)

  // Arm label used as plot-data column: "lyapunov_phi100" for Lyapunov
  // rows of the budget sweep, the arm otherwise.
  std::string label() const;
};

// Pure sponsoring (empty cache) per (budget, policy, seed), with the
// pure-sponsoring offline optimum as the "offline" arm.
std::vector<MetricsRow> sweep_budget(const ExperimentConfig& config);

// no_cache / best_cache / low_error / high_error Lyapunov arms per
// (budget, seed); offline_objective is the joint offline optimum.
std::vector<MetricsRow> compare_paradigms(const ExperimentConfig& config);

// Runs the enabled experiments and writes the report.
std::vector<MetricsRow> run_experiment(const ExperimentConfig& config);

// metrics.csv plus per-plot data (seed means and standard errors).
void emit_report(const std::vector<MetricsRow>& rows, const std::filesystem::path& out_dir);
// Plot data only, e.g. re-rendered from a persisted metrics.csv.
void write_plot_data(const std::vector<MetricsRow>& rows, const std::filesystem::path& out_dir);
void save_metrics(const std::vector<MetricsRow>& rows, const std::filesystem::path& path);
std::vector<MetricsRow> load_metrics(const std::filesystem::path& path);

struct ArmSummary {
  std::string label;
  Money budget;
  double mean = 0;
  double stderr_ = 0;
  double sponsored_mean = 0;
  std::size_t samples = 0;
};
// Seed-averaged payoff per (experiment, label, budget), sorted by budget,
// then arm, then phi.
std::vector<ArmSummary> summarize(const std::vector<MetricsRow>& rows,
                                  const std::string& experiment);

}  // namespace edgesponsor

#endif  // EDGESPONSOR_HARNESS_HPP_
