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

#include "edgesponsor/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "edgesponsor/caching.hpp"
#include "edgesponsor/csv.hpp"
#include "edgesponsor/errors.hpp"
#include "edgesponsor/offline.hpp"
#include "edgesponsor/random.hpp"

namespace edgesponsor {
namespace {

using nlohmann::json;

constexpr std::string_view kSweep = "budget_sweep";
constexpr std::string_view kParadigms = "paradigms";

// Stream ids for Rng::derive, per seed.
enum Stream : std::uint64_t {
  kProfileStream = 1,
  kTraceStream = 2,
  kDayStream = 3,
  kLowErrorStream = 11,
  kHighErrorStream = 12,
};

// ---- config parsing ----

void check_keys(const json& obj, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ValidationError("config: " + std::string(where) + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("config: unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <int D>
Decimal<D> decimal_from_json(const json& j, std::string_view what) {
  try {
    if (j.is_string()) return Decimal<D>::parse(j.get<std::string>());
    if (j.is_number_integer()) return Decimal<D>::from_integer(j.get<std::int64_t>());
    if (j.is_number()) return Decimal<D>::from_double(j.get<double>());
  } catch (const std::logic_error& e) {
    throw ValidationError("config: bad " + std::string(what) + ": " + e.what());
  } catch (const std::overflow_error& e) {
    throw ValidationError("config: bad " + std::string(what) + ": " + e.what());
  }
  throw ValidationError("config: " + std::string(what) + " must be a number");
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

KernelFamily parse_family(const std::string& name) {
  if (name == "identity") return KernelFamily::identity;
  if (name == "poisson_drift") return KernelFamily::poisson_drift;
  if (name == "truncated_gaussian") return KernelFamily::truncated_gaussian;
  throw ValidationError("config: unknown kernel family '" + name + "'");
}

void parse_workload(const json& j, WorkloadSpec& w) {
  check_keys(j, "workload",
             {"kind", "users", "contents", "locations", "horizon", "request_rate",
              "wifi_coverage", "zipf_exponent", "home_locations", "kernel"});
  if (j.contains("kind")) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "iid") {
      w.kind = WorkloadSpec::Kind::iid;
    } else if (kind == "markov") {
      w.kind = WorkloadSpec::Kind::markov;
    } else {
      throw ValidationError("config: unknown workload kind '" + kind + "'");
    }
  }
  read(j, "users", w.profile.users);
  read(j, "contents", w.profile.contents);
  read(j, "locations", w.profile.locations);
  read(j, "horizon", w.horizon);
  read(j, "request_rate", w.profile.request_rate);
  read(j, "wifi_coverage", w.profile.wifi_coverage);
  read(j, "zipf_exponent", w.profile.zipf_exponent);
  read(j, "home_locations", w.profile.home_locations);
  if (j.contains("kernel")) {
    const json& k = j.at("kernel");
    check_keys(k, "workload.kernel", {"family", "rho", "lambda", "sigma", "support_cap"});
    if (k.contains("family")) w.family = parse_family(k.at("family").get<std::string>());
    read(k, "rho", w.rho);
    read(k, "lambda", w.lambda);
    read(k, "sigma", w.sigma);
    read(k, "support_cap", w.support_cap);
  }
}

ExperimentConfig from_json(const json& j) {
  check_keys(j, "config",
             {"name", "workload", "catalog", "budgets", "phi", "phi_grid", "policies",
              "error_sigma", "estimated_arm", "seeds", "seed_count", "base_seed",
              "budget_mode", "experiments", "persist_runs", "threads", "output_dir"});
  ExperimentConfig c = ExperimentConfig::defaults();
  read(j, "name", c.name);
  if (j.contains("workload")) parse_workload(j.at("workload"), c.workload);
  if (j.contains("catalog")) {
    const json& k = j.at("catalog");
    check_keys(k, "catalog", {"value_scale", "cost_scale", "alpha", "seed"});
    read(k, "value_scale", c.catalog.value_scale);
    read(k, "cost_scale", c.catalog.cost_scale);
    if (k.contains("alpha")) c.catalog.alpha = decimal_from_json<6>(k.at("alpha"), "alpha");
    read(k, "seed", c.catalog_seed);
  }
  if (j.contains("budgets")) {
    c.budgets.clear();
    for (const json& b : j.at("budgets")) c.budgets.push_back(decimal_from_json<6>(b, "budget"));
  }
  if (j.contains("phi")) {
    if (j.at("phi").is_null()) {
      c.phi.reset();
    } else {
      c.phi = decimal_from_json<6>(j.at("phi"), "phi");
    }
  }
  if (j.contains("phi_grid")) {
    c.phi_grid.clear();
    for (const json& p : j.at("phi_grid")) c.phi_grid.push_back(decimal_from_json<6>(p, "phi"));
  }
  if (j.contains("policies")) {
    c.policies.clear();
    for (const json& p : j.at("policies")) c.policies.push_back(parse_policy(p.get<std::string>()));
  }
  if (j.contains("error_sigma")) {
    const json& e = j.at("error_sigma");
    check_keys(e, "error_sigma", {"low", "high"});
    read(e, "low", c.low_error_sigma);
    read(e, "high", c.high_error_sigma);
  }
  read(j, "estimated_arm", c.estimated_arm);
  if (j.contains("seeds") && (j.contains("seed_count") || j.contains("base_seed"))) {
    throw ValidationError("config: give either seeds or seed_count/base_seed");
  }
  if (j.contains("seeds")) {
    c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  } else if (j.contains("seed_count") || j.contains("base_seed")) {
    const int count = j.value("seed_count", static_cast<int>(c.seeds.size()));
    const std::uint64_t base = j.value("base_seed", std::uint64_t{1});
    if (count < 0) throw ValidationError("config: negative seed_count");
    c.seeds.clear();
    for (int i = 0; i < count; ++i) c.seeds.push_back(base + static_cast<std::uint64_t>(i));
  }
  if (j.contains("budget_mode")) c.budget_mode = parse_budget_mode(j.at("budget_mode").get<std::string>());
  if (j.contains("experiments")) {
    c.run_budget_sweep = c.run_paradigms = false;
    for (const json& e : j.at("experiments")) {
      const auto name = e.get<std::string>();
      if (name == kSweep) {
        c.run_budget_sweep = true;
      } else if (name == kParadigms) {
        c.run_paradigms = true;
      } else {
        throw ValidationError("config: unknown experiment '" + name + "'");
      }
    }
  }
  read(j, "persist_runs", c.persist_runs);
  read(j, "threads", c.threads);
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  c.catalog.contents = c.workload.profile.contents;
  c.validate();
  return c;
}

// ---- scenario ----

struct Scenario {
  Trace trace;
  DemandMatrix counts;
  EstimatedDemand estimate;
};

Scenario build_scenario(const ExperimentConfig& c, std::uint64_t seed) {
  const WorkloadSpec& w = c.workload;
  const IidProfile profile = make_zipf_profile(w.profile, Rng::derive(seed, kProfileStream));
  Trace day = generate_iid_trace(profile, w.horizon, Rng::derive(seed, kTraceStream));
  if (w.kind == WorkloadSpec::Kind::iid) {
    DemandMatrix counts = aggregate_counts(day);
    return {std::move(day), std::move(counts), estimate_iid(profile, w.horizon)};
  }
  const DemandMatrix base = aggregate_counts(day);
  int cap = w.support_cap;
  if (cap == 0) {
    double largest = 0;
    for (double v : base.grid().data()) largest = std::max(largest, v);
    cap = 2 * static_cast<int>(largest) + 50;
  }
  const MarkovKernel kernel(w.family, w.rho, w.lambda, w.sigma, cap);
  std::vector<Trace> days = generate_day_sequence(base, kernel, 2, w.profile.users, w.horizon,
                                                  Rng::derive(seed, kDayStream));
  Trace next = std::move(days.back());
  DemandMatrix counts = aggregate_counts(next);
  return {std::move(next), std::move(counts), estimate_markov(base, kernel)};
}

double sponsored_fraction(const ReducedSolution& sol, const DemandMatrix& counts,
                          const Catalog& catalog) {
  double requests = 0;
  double sponsored = 0;
  for (int l = 0; l <= counts.locations(); ++l) {
    for (int s = 1; s <= counts.contents(); ++s) {
      const double n = counts.at(l, s);
      if (n == 0) continue;
      requests += n;
      sponsored += sol.cached(l, s) ? n : static_cast<double>(sol.sponsored_requests(l, s, catalog));
    }
  }
  return requests > 0 ? sponsored / requests : 0.0;
}

class SeedJob {
 public:
  SeedJob(const ExperimentConfig& config, const Catalog& catalog, std::uint64_t seed)
      : config_(config), catalog_(catalog), seed_(seed) {}

  std::vector<MetricsRow> sweep() {
    const Scenario sc = build_scenario(config_, seed_);
    const int T = sc.trace.horizon();
    const CachePlan none = CachePlan::empty(sc.trace.locations(), catalog_.size());
    std::vector<MetricsRow> rows;
    for (const Money& budget : config_.budgets) {
      const ReducedSolution pure =
          solve_reduced(ReducedInstance{sc.counts, catalog_, budget, false});
      const double offline = pure.objective.to_double() / T;
      MetricsRow base;
      base.experiment = std::string(kSweep);
      base.budget = budget;
      base.seed = seed_;
      base.offline_objective = offline;

      MetricsRow off = base;
      off.arm = off.policy = "offline";
      off.payoff = offline;
      off.spend = pure.beta;
      off.sponsored_fraction = sponsored_fraction(pure, sc.counts, catalog_);
      finish(off);
      rows.push_back(off);

      for (Policy p : config_.policies) {
        if (p == Policy::lyapunov) {
          for (const Factor& phi : phis()) {
            rows.push_back(run_row(base, "lyapunov", p, phi, sc.trace, none, budget));
          }
        } else {
          rows.push_back(run_row(base, std::string(to_string(p)), p, std::nullopt, sc.trace,
                                 none, budget));
        }
      }
    }
    return rows;
  }

  std::vector<MetricsRow> paradigms() {
    const Scenario sc = build_scenario(config_, seed_);
    const int T = sc.trace.horizon();
    const DemandMatrix low = perturb_counts(sc.counts, config_.low_error_sigma,
                                            Rng::derive(seed_, kLowErrorStream));
    const DemandMatrix high = perturb_counts(sc.counts, config_.high_error_sigma,
                                             Rng::derive(seed_, kHighErrorStream));
    const Factor phi = config_.primary_phi(catalog_);
    const CachePlan none = CachePlan::empty(sc.trace.locations(), catalog_.size());
    std::vector<MetricsRow> rows;
    for (const Money& budget : config_.budgets) {
      const ReducedSolution joint =
          solve_reduced(ReducedInstance{sc.counts, catalog_, budget, true});
      MetricsRow base;
      base.experiment = std::string(kParadigms);
      base.budget = budget;
      base.seed = seed_;
      base.offline_objective = joint.objective.to_double() / T;

      std::vector<std::pair<std::string, CachePlan>> arms;
      arms.emplace_back("no_cache", none);
      arms.emplace_back("best_cache", CachePlan(joint.z, catalog_));
      arms.emplace_back("low_error",
                        plan_cache({low, Provenance::oracle}, catalog_, budget));
      arms.emplace_back("high_error",
                        plan_cache({high, Provenance::oracle}, catalog_, budget));
      if (config_.estimated_arm) {
        arms.emplace_back("estimated", plan_cache(sc.estimate, catalog_, budget));
      }
      const std::size_t first = rows.size();
      for (const auto& [arm, plan] : arms) {
        rows.push_back(run_row(base, arm, Policy::lyapunov, phi, sc.trace, plan, budget));
      }
      const double pure = rows[first].payoff;
      for (std::size_t i = first; i < rows.size(); ++i) {
        if (pure > 0) rows[i].pure_ratio = rows[i].payoff / pure;
      }
    }
    return rows;
  }

 private:
  std::vector<Factor> phis() const {
    std::vector<Factor> out = config_.phi_grid;
    const Factor primary = config_.primary_phi(catalog_);
    if (std::find(out.begin(), out.end(), primary) == out.end()) out.push_back(primary);
    std::sort(out.begin(), out.end());
    return out;
  }

  static void finish(MetricsRow& row) {
    if (row.offline_objective > 0) row.payoff_ratio = row.payoff / row.offline_objective;
  }

  MetricsRow run_row(const MetricsRow& base, const std::string& arm, Policy policy,
                     std::optional<Factor> phi, const Trace& trace, const CachePlan& plan,
                     Money budget) const {
    PolicyConfig pc;
    pc.policy = policy;
    if (phi) pc.phi = *phi;
    pc.budget_mode = config_.budget_mode;
    const PolicyRun run = run_policy(trace, plan, catalog_, pc, budget);
    MetricsRow row = base;
    row.arm = arm;
    row.policy = std::string(to_string(policy));
    row.phi = phi;
    row.payoff = total_payoff(run, plan, trace.horizon());
    row.spend = run.total_cost + plan.gamma();
    row.gamma = plan.gamma();
    row.sponsored_fraction = run.sponsored_fraction();
    finish(row);
    if (config_.persist_runs) {
      const auto dir = config_.output_dir / "runs";
      std::filesystem::create_directories(dir);
      save_run(run, plan, dir / (row.experiment + "_" + row.label() + "_b" +
                                 budget.to_string() + "_s" + std::to_string(seed_) + ".csv"));
    }
    return row;
  }

  const ExperimentConfig& config_;
  const Catalog& catalog_;
  std::uint64_t seed_;
};

// Runs fn(job) for every seed; results are concatenated in seed order
// whatever the thread count.
template <class Fn>
std::vector<MetricsRow> for_seeds(const ExperimentConfig& config, Fn fn) {
  const Catalog catalog = make_catalog(config.catalog, config.catalog_seed);
  const std::size_t n = config.seeds.size();
  std::vector<std::vector<MetricsRow>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        SeedJob job(config, catalog, config.seeds[i]);
        results[i] = fn(job);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t threads = config.threads > 0 ? static_cast<std::size_t>(config.threads)
                                           : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<MetricsRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

int arm_rank(std::string_view arm) {
  static constexpr std::string_view order[] = {
      "offline", "greedy", "avg_greedy", "lyapunov", "no_cache",
      "best_cache", "low_error", "high_error", "estimated"};
  for (std::size_t i = 0; i < std::size(order); ++i) {
    if (order[i] == arm) return static_cast<int>(i);
  }
  return static_cast<int>(std::size(order));
}

bool row_less(const MetricsRow& a, const MetricsRow& b) {
  if (a.experiment != b.experiment) return a.experiment < b.experiment;
  if (a.budget != b.budget) return a.budget < b.budget;
  if (arm_rank(a.arm) != arm_rank(b.arm)) return arm_rank(a.arm) < arm_rank(b.arm);
  if (a.arm != b.arm) return a.arm < b.arm;
  if (a.phi != b.phi) return a.phi < b.phi;
  return a.seed < b.seed;
}

std::string opt(const std::optional<double>& v) {
  return v ? csv::format_fixed(*v) : std::string();
}

void write_plot(const std::vector<ArmSummary>& summary, bool sponsored,
                const std::filesystem::path& path) {
  std::vector<std::string> labels;
  std::map<Money, std::map<std::string, const ArmSummary*>> by_budget;
  for (const ArmSummary& a : summary) {
    if (std::find(labels.begin(), labels.end(), a.label) == labels.end()) {
      labels.push_back(a.label);
    }
    by_budget[a.budget][a.label] = &a;
  }
  std::ofstream out = csv::open_output(path);
  out << "budget";
  for (const auto& l : labels) {
    if (sponsored) {
      out << ',' << l;
    } else {
      out << ',' << l << "_mean," << l << "_stderr";
    }
  }
  out << '\n';
  for (const auto& [budget, cells] : by_budget) {
    out << budget.to_string();
    for (const auto& l : labels) {
      const auto it = cells.find(l);
      if (sponsored) {
        out << ',';
        if (it != cells.end()) out << csv::format_fixed(it->second->sponsored_mean);
      } else if (it == cells.end()) {
        out << ",,";
      } else {
        out << ',' << csv::format_fixed(it->second->mean) << ','
            << csv::format_fixed(it->second->stderr_);
      }
    }
    out << '\n';
  }
}

const std::vector<std::string_view>& metrics_header() {
  static const std::vector<std::string_view> h = {
      "experiment", "arm",   "policy", "budget",          "phi",
      "seed",       "payoff", "spend", "gamma",           "sponsored_fraction",
      "offline_objective", "payoff_ratio", "pure_ratio"};
  return h;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig c;
  for (int b : {0, 10000, 20000, 40000, 60000, 80000, 100000}) {
    c.budgets.push_back(Money::from_integer(b));
  }
  c.phi_grid = {Factor::from_integer(1), Factor::from_integer(10), Factor::from_integer(100),
                Factor::from_integer(1000)};
  c.policies = {Policy::greedy, Policy::avg_greedy, Policy::lyapunov};
  for (std::uint64_t s = 1; s <= 20; ++s) c.seeds.push_back(s);
  c.catalog.contents = c.workload.profile.contents;
  return c;
}

void ExperimentConfig::validate() const {
  const auto& p = workload.profile;
  if (p.users <= 0 || p.contents <= 0 || p.locations <= 0) {
    throw ValidationError("config: users, contents and locations must be positive");
  }
  if (workload.horizon <= 0) throw ValidationError("config: horizon must be positive");
  if (catalog.contents != p.contents) {
    throw ValidationError("config: catalog and workload disagree on the number of contents");
  }
  if (catalog.alpha <= Factor::from_integer(1)) {
    throw ValidationError("config: alpha must exceed 1");
  }
  if (!(catalog.value_scale >= 0) || !(catalog.cost_scale > 0)) {
    throw ValidationError("config: value_scale must be >= 0 and cost_scale > 0");
  }
  if (budgets.empty()) throw ValidationError("config: budgets must not be empty");
  for (const Money& b : budgets) {
    if (b < Money{}) throw ValidationError("config: negative budget " + b.to_string());
  }
  if (std::set<Money>(budgets.begin(), budgets.end()).size() != budgets.size()) {
    throw ValidationError("config: duplicate budget");
  }
  if (phi && *phi < Factor{}) throw ValidationError("config: negative phi");
  for (const Factor& f : phi_grid) {
    if (f < Factor{}) throw ValidationError("config: negative phi in phi_grid");
  }
  for (Policy pol : policies) {
    if (pol == Policy::offline_replay) {
      throw ValidationError("config: offline_replay is not an experiment policy");
    }
  }
  if (low_error_sigma < 0 || high_error_sigma < 0) {
    throw ValidationError("config: error sigma must be non-negative");
  }
  if (seeds.empty()) throw ValidationError("config: at least one seed is required");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ValidationError("config: duplicate seed");
  }
  if (threads < 0) throw ValidationError("config: negative thread count");
}

Factor ExperimentConfig::primary_phi(const Catalog& c) const {
  return phi ? *phi : default_phi(c);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

std::string MetricsRow::label() const {
  if (experiment == kSweep && arm == "lyapunov" && phi) return arm + "_phi" + phi->to_string();
  return arm;
}

std::vector<MetricsRow> sweep_budget(const ExperimentConfig& config) {
  config.validate();
  auto rows = for_seeds(config, [](SeedJob& j) { return j.sweep(); });
  std::stable_sort(rows.begin(), rows.end(), row_less);
  return rows;
}

std::vector<MetricsRow> compare_paradigms(const ExperimentConfig& config) {
  config.validate();
  auto rows = for_seeds(config, [](SeedJob& j) { return j.paradigms(); });
  std::stable_sort(rows.begin(), rows.end(), row_less);
  return rows;
}

std::vector<MetricsRow> run_experiment(const ExperimentConfig& config) {
  std::vector<MetricsRow> rows;
  if (config.run_budget_sweep) rows = sweep_budget(config);
  if (config.run_paradigms) {
    auto more = compare_paradigms(config);
    rows.insert(rows.end(), more.begin(), more.end());
  }
  std::stable_sort(rows.begin(), rows.end(), row_less);
  emit_report(rows, config.output_dir);
  return rows;
}

void save_metrics(const std::vector<MetricsRow>& rows, const std::filesystem::path& path) {
  std::ofstream out = csv::open_output(path);
  const auto& h = metrics_header();
  for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
  out << '\n';
  for (const MetricsRow& r : rows) {
    out << r.experiment << ',' << r.arm << ',' << r.policy << ',' << r.budget.to_string() << ','
        << (r.phi ? r.phi->to_string() : "") << ',' << r.seed << ','
        << csv::format_fixed(r.payoff) << ',' << r.spend.to_string() << ','
        << r.gamma.to_string() << ',' << csv::format_fixed(r.sponsored_fraction) << ','
        << csv::format_fixed(r.offline_objective) << ',' << opt(r.payoff_ratio) << ','
        << opt(r.pure_ratio) << '\n';
  }
}

std::vector<MetricsRow> load_metrics(const std::filesystem::path& path) {
  csv::Reader in(path);
  in.expect_header(metrics_header());
  std::vector<MetricsRow> rows;
  auto optional_double = [&](std::size_t col) -> std::optional<double> {
    if (in.row()[col].empty()) return std::nullopt;
    return in.to_double(col);
  };
  while (in.next()) {
    in.expect_columns(metrics_header().size());
    const auto& f = in.row();
    MetricsRow r;
    r.experiment = f[0];
    r.arm = f[1];
    r.policy = f[2];
    r.budget = in.to_decimal<6>(3);
    if (!f[4].empty()) r.phi = in.to_decimal<6>(4);
    const std::int64_t seed = in.to_int(5);
    if (seed < 0) in.fail("negative seed");
    r.seed = static_cast<std::uint64_t>(seed);
    r.payoff = in.to_double(6);
    r.spend = in.to_decimal<6>(7);
    r.gamma = in.to_decimal<6>(8);
    r.sponsored_fraction = in.to_double(9);
    r.offline_objective = in.to_double(10);
    r.payoff_ratio = optional_double(11);
    r.pure_ratio = optional_double(12);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ArmSummary> summarize(const std::vector<MetricsRow>& rows,
                                  const std::string& experiment) {
  struct Acc {
    std::vector<double> payoff;
    double sponsored = 0;
    int rank = 0;
    std::optional<Factor> phi;
  };
  std::map<std::pair<Money, std::string>, Acc> acc;
  for (const MetricsRow& r : rows) {
    if (r.experiment != experiment) continue;
    Acc& a = acc[{r.budget, r.label()}];
    a.payoff.push_back(r.payoff);
    a.sponsored += r.sponsored_fraction;
    a.rank = arm_rank(r.arm);
    a.phi = r.phi;
  }
  std::vector<ArmSummary> out;
  for (const auto& [key, a] : acc) {
    ArmSummary s;
    s.budget = key.first;
    s.label = key.second;
    s.samples = a.payoff.size();
    const double n = static_cast<double>(s.samples);
    double sum = 0;
    for (double v : a.payoff) sum += v;
    s.mean = sum / n;
    if (s.samples > 1) {
      double ss = 0;
      for (double v : a.payoff) ss += (v - s.mean) * (v - s.mean);
      s.stderr_ = std::sqrt(ss / (n - 1)) / std::sqrt(n);
    }
    s.sponsored_mean = a.sponsored / n;
    out.push_back(s);
  }
  std::map<std::string, std::pair<int, std::optional<Factor>>> order;
  for (const auto& [key, a] : acc) order[key.second] = {a.rank, a.phi};
  std::stable_sort(out.begin(), out.end(), [&](const ArmSummary& x, const ArmSummary& y) {
    if (x.budget != y.budget) return x.budget < y.budget;
    if (order[x.label] != order[y.label]) return order[x.label] < order[y.label];
    return x.label < y.label;
  });
  return out;
}

void write_plot_data(const std::vector<MetricsRow>& rows, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto sweep = summarize(rows, std::string(kSweep));
  if (!sweep.empty()) {
    write_plot(sweep, false, out_dir / "plot_budget_sweep.csv");
    write_plot(sweep, true, out_dir / "plot_sponsored_fraction.csv");
  }
  const auto par = summarize(rows, std::string(kParadigms));
  if (!par.empty()) write_plot(par, false, out_dir / "plot_paradigms.csv");
}

void emit_report(const std::vector<MetricsRow>& rows, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  save_metrics(rows, out_dir / "metrics.csv");
  write_plot_data(rows, out_dir);
}

}  // namespace edgesponsor
