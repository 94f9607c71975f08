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

// edgesponsor: workload generation, offline solving, cache planning,
// online simulation and experiment reporting.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "edgesponsor/caching.hpp"
#include "edgesponsor/csv.hpp"
#include "edgesponsor/errors.hpp"
#include "edgesponsor/harness.hpp"
#include "edgesponsor/model.hpp"
#include "edgesponsor/offline.hpp"
#include "edgesponsor/online.hpp"
#include "edgesponsor/workload.hpp"

namespace es = edgesponsor;

namespace {

es::Money money(const std::string& text, const char* what) {
  try {
    return es::Money::parse(text);
  } catch (const std::exception& e) {
    throw es::ValidationError(std::string("bad ") + what + " '" + text + "': " + e.what());
  }
}

es::KernelFamily kernel_family(const std::string& name) {
  if (name == "identity") return es::KernelFamily::identity;
  if (name == "poisson_drift") return es::KernelFamily::poisson_drift;
  if (name == "truncated_gaussian") return es::KernelFamily::truncated_gaussian;
  throw es::ValidationError("unknown kernel family '" + name + "'");
}

struct KernelFlags {
  std::string family = "poisson_drift";
  double rho = 1.0;
  double lambda = 0.0;
  double sigma = 1.0;
  int cap = 200;

  void add(CLI::App* app) {
    app->add_option("--kernel", family, "identity, poisson_drift or truncated_gaussian");
    app->add_option("--rho", rho, "drift multiplier");
    app->add_option("--lambda", lambda, "drift offset");
    app->add_option("--sigma", sigma, "gaussian kernel spread");
    app->add_option("--support-cap", cap, "largest count in the kernel support");
  }
  es::MarkovKernel make() const {
    return es::MarkovKernel(kernel_family(family), rho, lambda, sigma, cap);
  }
};

void print_summary(const es::PolicyRun& run, const es::CachePlan& plan, es::Policy policy,
                   es::Money budget) {
  std::cout << "policy=" << es::to_string(policy)
            << " payoff=" << es::csv::format_fixed(es::total_payoff(run, plan, run.horizon))
            << " net=" << es::net_payoff(run, plan).to_string()
            << " value=" << run.total_value.to_string()
            << " cellular_cost=" << run.total_cost.to_string()
            << " gamma=" << plan.gamma().to_string()
            << " spend=" << (run.total_cost + plan.gamma()).to_string()
            << " budget=" << budget.to_string()
            << " sponsored_fraction=" << es::csv::format_fixed(run.sponsored_fraction())
            << " final_queue=" << run.final_queue.to_string()
            << " within_budget=" << (es::check_budget(run, plan, budget) ? "yes" : "no") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edge caching and data sponsoring toolkit"};
  app.require_subcommand(1);

  // ---- generate ----
  auto* gen = app.add_subcommand("generate", "synthetic profiles, catalogs and traces");
  gen->require_subcommand(1);

  es::ZipfProfileSpec pspec;
  std::uint64_t pseed = 1;
  std::string pout;
  auto* gprof = gen->add_subcommand("profile", "Zipf i.i.d. user profile");
  gprof->add_option("--users", pspec.users);
  gprof->add_option("--contents", pspec.contents);
  gprof->add_option("--locations", pspec.locations);
  gprof->add_option("--request-rate", pspec.request_rate);
  gprof->add_option("--wifi-coverage", pspec.wifi_coverage);
  gprof->add_option("--zipf", pspec.zipf_exponent);
  gprof->add_option("--home-locations", pspec.home_locations);
  gprof->add_option("--seed", pseed);
  gprof->add_option("--out", pout)->required();
  gprof->callback([&] { es::save_profile(es::make_zipf_profile(pspec, pseed), pout); });

  es::CatalogSpec cspec;
  std::string calpha = "3";
  std::uint64_t cseed = 7;
  std::string cout_path;
  auto* gcat = gen->add_subcommand("catalog", "content values and cellular costs");
  gcat->add_option("--contents", cspec.contents);
  gcat->add_option("--value-scale", cspec.value_scale);
  gcat->add_option("--cost-scale", cspec.cost_scale);
  gcat->add_option("--seed", cseed);
  gcat->add_option("--out", cout_path)->required();
  gcat->callback([&] {
    // alpha is not stored in the catalog file; any valid value works here.
    cspec.alpha = es::Factor::parse(calpha);
    es::save_catalog(es::make_catalog(cspec, cseed), cout_path);
  });

  std::string tprofile, tout;
  int thorizon = 2000;
  std::uint64_t tseed = 1;
  auto* gtrace = gen->add_subcommand("trace", "i.i.d. request trace from a profile");
  gtrace->add_option("--profile", tprofile)->required();
  gtrace->add_option("--horizon", thorizon);
  gtrace->add_option("--seed", tseed);
  gtrace->add_option("--out", tout)->required();
  gtrace->callback([&] {
    es::save_trace(es::generate_iid_trace(es::load_profile(tprofile), thorizon, tseed), tout);
  });

  std::string dbase, dprefix;
  int ddays = 2, dusers = 200, dhorizon = 2000;
  std::uint64_t dseed = 1;
  KernelFlags dkernel;
  auto* gdays = gen->add_subcommand("days", "Markov day sequence from base counts");
  gdays->add_option("--base", dbase, "demand CSV realized on day 1")->required();
  gdays->add_option("--days", ddays);
  gdays->add_option("--users", dusers);
  gdays->add_option("--horizon", dhorizon);
  gdays->add_option("--seed", dseed);
  gdays->add_option("--out-prefix", dprefix, "writes <prefix>_day<k>.csv")->required();
  dkernel.add(gdays);
  gdays->callback([&] {
    const auto days = es::generate_day_sequence(es::load_demand(dbase), dkernel.make(), ddays,
                                                dusers, dhorizon, dseed);
    for (std::size_t k = 0; k < days.size(); ++k) {
      es::save_trace(days[k], dprefix + "_day" + std::to_string(k + 1) + ".csv");
    }
  });

  // ---- aggregate ----
  std::string atrace, aout;
  auto* agg = app.add_subcommand("aggregate", "per-(location, content) request counts of a trace");
  agg->add_option("--trace", atrace)->required();
  agg->add_option("--out", aout)->required();
  agg->callback([&] { es::save_demand(es::aggregate_counts(es::load_trace(atrace)), aout); });

  // ---- solve-offline ----
  std::string scatalog, strace, sdemand, sout, sbudget, salpha = "3";
  bool spure = false;
  auto* solve = app.add_subcommand("solve-offline", "offline optimum of the aggregated problem");
  solve->add_option("--catalog", scatalog)->required();
  solve->add_option("--alpha", salpha, "caching-to-delivery cost factor");
  auto* solve_trace = solve->add_option("--trace", strace);
  solve->add_option("--demand", sdemand, "use counts directly")->excludes(solve_trace);
  solve->add_option("--budget", sbudget)->required();
  solve->add_flag("--pure", spure, "forbid caching (pure sponsoring benchmark)");
  solve->add_option("--out", sout, "solution CSV");
  solve->callback([&] {
    if (strace.empty() == sdemand.empty()) {
      throw CLI::ValidationError("solve-offline", "give exactly one of --trace or --demand");
    }
    const es::Catalog catalog = es::load_catalog(scatalog, es::Factor::parse(salpha));
    const es::DemandMatrix counts =
        strace.empty() ? es::load_demand(sdemand) : es::aggregate_counts(es::load_trace(strace));
    const es::ReducedSolution sol = es::solve_reduced(
        es::ReducedInstance{counts, catalog, money(sbudget, "budget"), !spure});
    if (!sout.empty()) es::save_solution(sol, catalog, sout);
    std::cout << "objective=" << sol.objective.to_string() << " gamma=" << sol.gamma.to_string()
              << " beta=" << sol.beta.to_string() << " integral=" << (sol.integral ? "yes" : "no")
              << " nodes=" << sol.nodes << '\n';
  });

  // ---- plan-cache ----
  std::string pcatalog, pdemand, pprofile, pprev, pplan, pbudget, palpha = "3";
  int phorizon = 0;
  double psigma = 0;
  std::uint64_t pnoise_seed = 1;
  KernelFlags pkernel;
  auto* plan = app.add_subcommand("plan-cache", "cache placement from estimated demand");
  plan->add_option("--catalog", pcatalog)->required();
  plan->add_option("--alpha", palpha);
  plan->add_option("--budget", pbudget)->required();
  plan->add_option("--estimate", pdemand, "estimated counts CSV");
  plan->add_option("--profile", pprofile, "i.i.d. profile (needs --horizon)");
  plan->add_option("--horizon", phorizon);
  plan->add_option("--previous", pprev, "previous-day counts for the Markov estimate");
  pkernel.add(plan);
  plan->add_option("--perturb", psigma, "log-normal forecast noise sigma");
  plan->add_option("--noise-seed", pnoise_seed);
  plan->add_option("--out", pplan)->required();
  plan->callback([&] {
    const int sources = !pdemand.empty() + !pprofile.empty() + !pprev.empty();
    if (sources != 1) {
      throw CLI::ValidationError("plan-cache",
                                 "give exactly one of --estimate, --profile or --previous");
    }
    const es::Catalog catalog = es::load_catalog(pcatalog, es::Factor::parse(palpha));
    es::EstimatedDemand est;
    if (!pdemand.empty()) {
      est = {es::load_demand(pdemand), es::Provenance::oracle};
    } else if (!pprofile.empty()) {
      if (phorizon <= 0) throw CLI::ValidationError("plan-cache", "--profile needs --horizon");
      est = es::estimate_iid(es::load_profile(pprofile), phorizon);
    } else {
      est = es::estimate_markov(es::load_demand(pprev), pkernel.make());
    }
    if (psigma > 0) est.counts = es::perturb_counts(est.counts, psigma, pnoise_seed);
    const es::CachePlan cache = es::plan_cache(est, catalog, money(pbudget, "budget"));
    es::save_cache_plan(cache, pplan);
    std::cout << "cached=" << cache.cached_count() << " gamma=" << cache.gamma().to_string()
              << '\n';
  });

  // ---- simulate ----
  std::string mtrace, mplan, mcatalog, mbudget, mpolicy = "lyapunov", mmode = "hard", mout;
  std::string malpha = "3";
  std::optional<std::string> mphi;
  std::uint64_t mseed = 1;
  auto* sim = app.add_subcommand("simulate", "run an online policy over a trace");
  sim->add_option("--trace", mtrace)->required();
  sim->add_option("--catalog", mcatalog)->required();
  sim->add_option("--alpha", malpha);
  sim->add_option("--plan", mplan, "cache plan CSV (default: empty cache)");
  sim->add_option("--budget", mbudget)->required();
  sim->add_option("--policy", mpolicy, "lyapunov, greedy, avg_greedy or offline_replay");
  sim->add_option("--phi", mphi, "control parameter (default 100 * mean V / mean C)");
  sim->add_option("--budget-mode", mmode, "hard or average")
      ->check(CLI::IsMember({"hard", "average"}));
  sim->add_option("--seed", mseed, "request selection seed for offline_replay");
  sim->add_option("--out", mout, "run CSV slot,value,cost,q");
  sim->callback([&] {
    const es::Catalog catalog = es::load_catalog(mcatalog, es::Factor::parse(malpha));
    const es::Trace trace = es::load_trace(mtrace);
    const es::Money budget = money(mbudget, "budget");
    es::PolicyConfig pc;
    pc.policy = es::parse_policy(mpolicy);
    pc.budget_mode = es::parse_budget_mode(mmode);
    pc.phi = mphi ? es::Factor::parse(*mphi) : es::default_phi(catalog);
    es::CachePlan cache = es::CachePlan::empty(trace.locations(), catalog.size());
    if (pc.policy == es::Policy::offline_replay) {
      if (!mplan.empty()) {
        throw CLI::ValidationError("simulate", "offline_replay computes its own cache plan");
      }
      const es::ReducedSolution sol = es::solve_reduced(
          es::ReducedInstance{es::aggregate_counts(trace), catalog, budget, true});
      cache = es::CachePlan(sol.z, catalog);
      pc.replay = es::expand_solution(sol, trace, catalog, mseed);
    } else if (!mplan.empty()) {
      cache = es::load_cache_plan(mplan, catalog);
    }
    const es::PolicyRun run = es::run_policy(trace, cache, catalog, pc, budget);
    if (!mout.empty()) es::save_run(run, cache, mout);
    print_summary(run, cache, pc.policy, budget);
  });

  // ---- experiment ----
  std::string econfig, eout;
  int ethreads = -1;
  auto* exp = app.add_subcommand("experiment", "budget sweep and cache-paradigm comparison");
  exp->add_option("--config", econfig, "JSON experiment config")->required();
  exp->add_option("--output-dir", eout, "overrides output_dir");
  exp->add_option("--threads", ethreads, "overrides threads");
  exp->callback([&] {
    es::ExperimentConfig cfg = es::load_config(econfig);
    if (!eout.empty()) cfg.output_dir = eout;
    if (ethreads >= 0) cfg.threads = ethreads;
    const auto rows = es::run_experiment(cfg);
    std::cout << "rows=" << rows.size() << " output=" << cfg.output_dir.string() << '\n';
  });

  // ---- report ----
  std::string rmetrics, rout;
  auto* rep = app.add_subcommand("report", "re-render plot data from metrics.csv");
  rep->add_option("--metrics", rmetrics)->required();
  rep->add_option("--out-dir", rout, "default: the metrics file's directory");
  rep->callback([&] {
    const auto rows = es::load_metrics(rmetrics);
    const std::filesystem::path dir =
        rout.empty() ? std::filesystem::path(rmetrics).parent_path() : std::filesystem::path(rout);
    es::write_plot_data(rows, dir.empty() ? "." : dir);
    for (const std::string experiment : {"budget_sweep", "paradigms"}) {
      for (const es::ArmSummary& s : es::summarize(rows, experiment)) {
        std::cout << experiment << " budget=" << s.budget.to_string() << " arm=" << s.label
                  << " mean=" << es::csv::format_fixed(s.mean)
                  << " stderr=" << es::csv::format_fixed(s.stderr_)
                  << " sponsored=" << es::csv::format_fixed(s.sponsored_mean)
                  << " n=" << s.samples << '\n';
      }
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const es::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
