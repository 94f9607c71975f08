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

#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "edgesponsor/csv.hpp"
#include "edgesponsor/errors.hpp"
#include "edgesponsor/harness.hpp"
#include "support.hpp"

using namespace edgesponsor;
using testing::M;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c = ExperimentConfig::defaults();
  c.workload.profile = {20, 30, 5, 0.5, 0.6, 0.8, 2};
  c.workload.horizon = 100;
  c.catalog.contents = 30;
  c.budgets = {M(0), M(20), M(60)};
  c.seeds = {1, 2, 3};
  c.threads = 1;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) out.push_back(line);
  return out;
}

MetricsRow row(const char* arm, std::uint64_t seed, double payoff) {
  MetricsRow r;
  r.experiment = "budget_sweep";
  r.arm = r.policy = arm;
  r.budget = M(10);
  r.seed = seed;
  r.payoff = payoff;
  r.offline_objective = 2.0;
  r.payoff_ratio = payoff / 2.0;
  return r;
}

}  // namespace

TEST_CASE("config parsing and defaults") {
  const ExperimentConfig d = parse_config("{}");
  CHECK(d.budgets.size() == 7);
  CHECK(d.seeds.size() == 20);
  CHECK(d.workload.profile.users == 200);
  CHECK(d.workload.horizon == 2000);
  CHECK_FALSE(d.phi.has_value());

  const ExperimentConfig c = parse_config(R"({
    "name": "x",
    "workload": {"kind": "markov", "users": 7, "contents": 9, "locations": 3, "horizon": 40,
                 "kernel": {"family": "truncated_gaussian", "rho": 0.9, "sigma": 2}},
    "catalog": {"alpha": "2.5", "seed": 4},
    "budgets": [0, "12.5", 30.25],
    "phi": 50,
    "phi_grid": [1, 10],
    "policies": ["greedy", "lyapunov"],
    "error_sigma": {"low": 0.2, "high": 1.0},
    "seed_count": 3, "base_seed": 10,
    "budget_mode": "average",
    "experiments": ["paradigms"],
    "threads": 2,
    "output_dir": "somewhere"
  })");
  CHECK(c.name == "x");
  CHECK(c.workload.kind == WorkloadSpec::Kind::markov);
  CHECK(c.workload.family == KernelFamily::truncated_gaussian);
  CHECK(c.catalog.contents == 9);
  CHECK(c.catalog.alpha == M("2.5"));
  CHECK(c.catalog_seed == 4);
  CHECK(c.budgets == std::vector<Money>{M(0), M("12.5"), M("30.25")});
  CHECK(c.phi == M(50));
  CHECK(c.seeds == std::vector<std::uint64_t>{10, 11, 12});
  CHECK(c.budget_mode == BudgetMode::average);
  CHECK_FALSE(c.run_budget_sweep);
  CHECK(c.run_paradigms);
  CHECK(c.low_error_sigma == 0.2);
  CHECK(c.output_dir == "somewhere");
}

TEST_CASE("config validation errors") {
  for (const char* bad : {
           R"({"budget": [1]})",
           R"({"workload": {"userz": 3}})",
           R"({"budgets": []})",
           R"({"budgets": [-1]})",
           R"({"budgets": [5, 5]})",
           R"({"seeds": [1, 1]})",
           R"({"seeds": []})",
           R"({"seeds": [1], "seed_count": 2})",
           R"({"policies": ["offline_replay"]})",
           R"({"policies": ["psychic"]})",
           R"({"phi": -1})",
           R"({"phi_grid": [1, -10]})",
           R"({"error_sigma": {"low": -0.1}})",
           R"({"workload": {"horizon": 0}})",
           R"({"workload": {"kind": "bursty"}})",
           R"({"experiments": ["fig9"]})",
           R"({"catalog": {"alpha": "0.5"}})",
           R"({"catalog": {"cost_scale": 0}})",
           R"({"budgets": ["1.0000001"]})",
           R"({"threads": -2})",
           R"([1, 2])",
           R"({"budgets": [1,)",
       }) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_config(bad), ValidationError);
  }
  ExperimentConfig c = small_config();
  c.catalog.contents = 31;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  CHECK_THROWS(load_config("/nonexistent/config.json"));
}

TEST_CASE("budget sweep basics") {
  const ExperimentConfig c = small_config();
  const auto rows = sweep_budget(c);
  // per budget and seed: offline, greedy, avg_greedy and one lyapunov row
  // per phi (grid plus the default)
  CHECK(rows.size() == 3 * 3 * (3 + 5));
  std::map<std::pair<Money, std::uint64_t>, double> offline;
  for (const auto& r : rows) {
    if (r.arm == "offline") offline[{r.budget, r.seed}] = r.payoff;
  }
  for (const auto& r : rows) {
    CAPTURE(r.label());
    if (r.budget == M(0)) {
      CHECK(r.payoff == 0.0);
      CHECK(r.spend == M(0));
    }
    CHECK(r.payoff <= offline.at({r.budget, r.seed}) + 1e-12);
    CHECK(r.spend <= r.budget);
    CHECK(r.gamma == M(0));
    if (r.offline_objective > 0) {
      REQUIRE(r.payoff_ratio.has_value());
      CHECK(*r.payoff_ratio == doctest::Approx(r.payoff / r.offline_objective));
    } else {
      CHECK_FALSE(r.payoff_ratio.has_value());
    }
  }
  // sorted by budget, then arm rank
  CHECK(rows.front().arm == "offline");
  CHECK(rows.front().budget == M(0));
  CHECK(rows.back().budget == M(60));
}

TEST_CASE("paradigm comparison basics") {
  ExperimentConfig c = small_config();
  c.estimated_arm = true;
  const auto rows = compare_paradigms(c);
  CHECK(rows.size() == 3 * 3 * 5);
  for (const auto& r : rows) {
    CHECK(r.experiment == "paradigms");
    CHECK(r.policy == "lyapunov");
    CHECK(r.spend <= r.budget);
    CHECK(r.gamma <= r.budget);
    if (r.arm == "no_cache") {
      CHECK(r.gamma == M(0));
      if (r.payoff > 0) CHECK(*r.pure_ratio == doctest::Approx(1.0));
    }
    // arms pay for their caches
    CHECK(r.payoff <= r.offline_objective + 1e-12);
  }
}

TEST_CASE("prohibitive caching makes every arm the no-cache arm") {
  ExperimentConfig c = small_config();
  c.catalog.alpha = Factor::from_integer(1'000'000);
  const auto rows = compare_paradigms(c);
  std::map<std::pair<Money, std::uint64_t>, double> pure;
  for (const auto& r : rows) {
    if (r.arm == "no_cache") pure[{r.budget, r.seed}] = r.payoff;
  }
  for (const auto& r : rows) {
    CHECK(r.gamma == M(0));
    CHECK(r.payoff == pure.at({r.budget, r.seed}));
  }
}

TEST_CASE("markov workload runs") {
  ExperimentConfig c = small_config();
  c.workload.kind = WorkloadSpec::Kind::markov;
  c.workload.rho = 0.9;
  c.workload.lambda = 0.2;
  c.estimated_arm = true;
  c.seeds = {4};
  const auto rows = compare_paradigms(c);
  CHECK(rows.size() == 3 * 5);
  const auto sweep = sweep_budget(c);
  CHECK_FALSE(sweep.empty());
}

TEST_CASE("results do not depend on the thread count") {
  ExperimentConfig a = small_config();
  ExperimentConfig b = small_config();
  b.threads = 3;
  testing::TempDir dir("threads");
  a.output_dir = dir / "a";
  b.output_dir = dir / "b";
  run_experiment(a);
  run_experiment(b);
  const std::string ma = slurp(dir / "a" / "metrics.csv");
  CHECK(ma == slurp(dir / "b" / "metrics.csv"));
  CHECK(lines(ma).size() > 1);
  CHECK(slurp(dir / "a" / "plot_paradigms.csv") == slurp(dir / "b" / "plot_paradigms.csv"));
}

TEST_CASE("report of a single row") {
  testing::TempDir dir("single");
  emit_report({row("greedy", 1, 1.5)}, dir.path());
  const auto text = lines(slurp(dir / "metrics.csv"));
  REQUIRE(text.size() == 2);
  CHECK(text[0] ==
        "experiment,arm,policy,budget,phi,seed,payoff,spend,gamma,sponsored_fraction,"
        "offline_objective,payoff_ratio,pure_ratio");
  CHECK(text[1] == "budget_sweep,greedy,greedy,10,,1,1.500000,0,0,0.000000,2.000000,0.750000,");
  CHECK_FALSE(std::filesystem::exists(dir / "plot_paradigms.csv"));
}

TEST_CASE("two seeds give mean and standard error") {
  testing::TempDir dir("stderr");
  emit_report({row("greedy", 1, 1.0), row("greedy", 2, 2.0)}, dir.path());
  const auto text = lines(slurp(dir / "plot_budget_sweep.csv"));
  REQUIRE(text.size() == 2);
  CHECK(text[0] == "budget,greedy_mean,greedy_stderr");
  // sample sd of {1, 2} is 0.7071..; / sqrt(2) = 0.5
  CHECK(text[1] == "10,1.500000,0.500000");
  const auto summary = summarize({row("greedy", 1, 1.0), row("greedy", 2, 2.0)}, "budget_sweep");
  REQUIRE(summary.size() == 1);
  CHECK(summary[0].samples == 2);
  CHECK(summary[0].stderr_ == doctest::Approx(0.5));
}

TEST_CASE("paradigm plot data has four arm columns") {
  ExperimentConfig c = small_config();
  c.run_budget_sweep = false;
  testing::TempDir dir("fourarm");
  c.output_dir = dir.path();
  run_experiment(c);
  const auto text = lines(slurp(dir / "plot_paradigms.csv"));
  REQUIRE(text.size() == 4);
  CHECK(text[0] ==
        "budget,no_cache_mean,no_cache_stderr,best_cache_mean,best_cache_stderr,"
        "low_error_mean,low_error_stderr,high_error_mean,high_error_stderr");
  for (std::size_t i = 1; i < text.size(); ++i) {
    CHECK(std::count(text[i].begin(), text[i].end(), ',') == 8);
  }
  CHECK_FALSE(std::filesystem::exists(dir / "plot_budget_sweep.csv"));
}

TEST_CASE("metrics round trip through the file") {
  testing::TempDir dir("metrics");
  const auto rows = sweep_budget(small_config());
  save_metrics(rows, dir / "m.csv");
  const auto back = load_metrics(dir / "m.csv");
  REQUIRE(back.size() == rows.size());
  save_metrics(back, dir / "m2.csv");
  CHECK(slurp(dir / "m.csv") == slurp(dir / "m2.csv"));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].label() == rows[i].label());
    CHECK(back[i].spend == rows[i].spend);
    CHECK(back[i].phi == rows[i].phi);
  }
  write_plot_data(back, dir / "plots");
  CHECK(std::filesystem::exists(dir / "plots" / "plot_sponsored_fraction.csv"));
  { std::ofstream(dir / "bad.csv") << "experiment,arm\n"; }
  CHECK_THROWS_AS(load_metrics(dir / "bad.csv"), ParseError);
}

TEST_CASE("persisted runs reproduce every payoff") {
  ExperimentConfig c = small_config();
  c.seeds = {5, 6};
  c.persist_runs = true;
  testing::TempDir dir("persist");
  c.output_dir = dir.path();
  const auto rows = run_experiment(c);
  int audited = 0;
  for (const auto& r : rows) {
    if (r.arm == "offline") continue;
    const auto path = dir / "runs" /
                      (r.experiment + "_" + r.label() + "_b" + r.budget.to_string() + "_s" +
                       std::to_string(r.seed) + ".csv");
    REQUIRE(std::filesystem::exists(path));
    const PersistedRun p = load_run(path);
    CHECK(p.gamma == r.gamma);
    const double payoff = (p.run.total_value - p.run.total_cost - p.gamma).to_double() /
                          p.run.horizon;
    CHECK(csv::format_fixed(payoff) == csv::format_fixed(r.payoff));
    CHECK(p.run.total_cost + p.gamma == r.spend);
    ++audited;
  }
  CHECK(audited > 0);
}
