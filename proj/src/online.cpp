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

#include "edgesponsor/online.hpp"

#include <algorithm>
#include <numeric>

#include "edgesponsor/errors.hpp"

namespace edgesponsor {
namespace {

// phi * (V - C) - q * C at scale 10^12.
int128 cell_score(Factor phi, Money q, Money value, Money cost) {
  return static_cast<int128>(phi.raw()) * (value - cost).raw() -
         static_cast<int128>(q.raw()) * cost.raw();
}

bool wifi_available(const Request& r, const CachePlan& plan) {
  return plan.cached(r.location, r.content);
}

// Shared body of the three rules. `before` (optional) receives the
// remaining budget each decision saw.
template <class Rank>
std::vector<Decision> decide(std::span<const Request> requests, const CachePlan& plan,
                             const Catalog& catalog, Money limit, bool gated,
                             Rank rank_key, std::vector<Money>* before) {
  std::vector<Decision> out(requests.size());
  std::vector<std::size_t> candidates;
  if (before != nullptr) before->assign(requests.size(), limit);
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const Request& r = requests[i];
    if (!r.has_content()) continue;
    if (wifi_available(r, plan)) {
      out[i].wifi = true;
    } else if (rank_key(r) > 0) {
      candidates.push_back(i);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    const int128 ka = rank_key(requests[a]);
    const int128 kb = rank_key(requests[b]);
    if (ka != kb) return ka > kb;
    return requests[a].user < requests[b].user;
  });
  Money left = limit;
  for (std::size_t i : candidates) {
    const Money c = catalog.cell_cost(requests[i].content);
    if (before != nullptr) (*before)[i] = left;
    if (gated && c > left) continue;
    out[i].cellular = true;
    left -= c;
  }
  return out;
}

std::vector<Decision> lyapunov_impl(std::span<const Request> requests,
                                    const QueueState& state, const CachePlan& plan,
                                    const Catalog& catalog, Factor phi, BudgetMode mode,
                                    std::vector<Money>* before) {
  auto key = [&](const Request& r) {
    return cell_score(phi, state.q, catalog.value(r.content), catalog.cell_cost(r.content));
  };
  return decide(requests, plan, catalog, state.remaining, mode == BudgetMode::hard, key,
                before);
}

std::vector<Decision> greedy_impl(std::span<const Request> requests, Money limit,
                                  const CachePlan& plan, const Catalog& catalog,
                                  std::vector<Money>* before) {
  auto key = [&](const Request& r) {
    return static_cast<int128>((catalog.value(r.content) - catalog.cell_cost(r.content)).raw());
  };
  return decide(requests, plan, catalog, limit, true, key, before);
}

}  // namespace

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::lyapunov: return "lyapunov";
    case Policy::greedy: return "greedy";
    case Policy::avg_greedy: return "avg_greedy";
    case Policy::offline_replay: return "offline_replay";
  }
  return "?";
}

Policy parse_policy(std::string_view name) {
  for (Policy p : {Policy::lyapunov, Policy::greedy, Policy::avg_greedy, Policy::offline_replay}) {
    if (to_string(p) == name) return p;
  }
  throw ValidationError("unknown policy '" + std::string(name) + "'");
}

std::string_view to_string(BudgetMode m) {
  return m == BudgetMode::hard ? "hard" : "average";
}

BudgetMode parse_budget_mode(std::string_view name) {
  if (name == "hard") return BudgetMode::hard;
  if (name == "average") return BudgetMode::average;
  throw ValidationError("unknown budget mode '" + std::string(name) + "'");
}

QueueState queue_update(const QueueState& state, Money slot_cost, BudgetMode mode) {
  if (slot_cost < Money{}) throw ValidationError("queue_update: negative slot cost");
  if (mode == BudgetMode::hard && slot_cost > state.remaining) {
    throw Error("queue_update: slot cost " + slot_cost.to_string() +
                " exceeds the remaining budget " + state.remaining.to_string());
  }
  QueueState next = state;
  next.q = std::max(state.q - state.slot_budget, Money{}) + slot_cost;
  next.remaining = state.remaining - slot_cost;
  return next;
}

Factor default_phi(const Catalog& catalog) {
  const Money c = catalog.mean_cell_cost();
  if (c <= Money{}) return Factor::from_integer(100);
  return Factor::from_integer(100) * (catalog.mean_value() / c);
}

double drift_constant(Money slot_budget, int users, const Catalog& catalog) {
  const double b = slot_budget.to_double();
  const double arrivals = users * catalog.max_cell_cost().to_double();
  return 0.5 * (b * b + arrivals * arrivals);
}

std::vector<Decision> lyapunov_decide(std::span<const Request> requests,
                                      const QueueState& state, const CachePlan& plan,
                                      const Catalog& catalog, Factor phi, BudgetMode mode) {
  return lyapunov_impl(requests, state, plan, catalog, phi, mode, nullptr);
}

std::vector<Decision> greedy_decide(std::span<const Request> requests, Money remaining,
                                    const CachePlan& plan, const Catalog& catalog) {
  return greedy_impl(requests, remaining, plan, catalog, nullptr);
}

std::vector<Decision> avg_greedy_decide(std::span<const Request> requests, Money allowance,
                                        const CachePlan& plan, const Catalog& catalog) {
  return greedy_impl(requests, allowance, plan, catalog, nullptr);
}

PolicyRun run_policy(const Trace& trace, const CachePlan& plan, const Catalog& catalog,
                     const PolicyConfig& config, Money budget) {
  if (plan.locations() != trace.locations() || plan.contents() != catalog.size() ||
      trace.contents() > catalog.size()) {
    throw StructuralError("run_policy: plan, trace and catalog dimensions disagree");
  }
  if (plan.gamma() > budget) {
    throw ValidationError("run_policy: caching cost " + plan.gamma().to_string() +
                          " exceeds the budget " + budget.to_string());
  }
  if (config.phi < Factor{}) throw ValidationError("run_policy: phi must be non-negative");
  const bool replay = config.policy == Policy::offline_replay;
  if (replay && config.replay.size() != trace.events().size()) {
    throw StructuralError("run_policy: replay needs one decision per trace event");
  }

  const int T = trace.horizon();
  PolicyRun run;
  run.horizon = T;
  run.sponsor_budget = budget - plan.gamma();
  run.slot_budget = T > 0 ? run.sponsor_budget.divide_floor(T) : Money{};
  run.slots.reserve(static_cast<std::size_t>(T));

  QueueState state{Money{}, run.slot_budget, run.sponsor_budget};
  Money allowance;
  std::vector<Request> requests;
  std::vector<Sponsorship> slot_decisions;
  std::vector<Money> before;
  std::size_t cursor = 0;  // replay position

  for (int t = 1; t <= T; ++t) {
    const auto events = trace.slot_events(t);
    requests.clear();
    slot_decisions.clear();
    std::vector<Decision> decisions;
    if (replay) {
      for (const Request& r : events) {
        const Sponsorship& s = config.replay[cursor++];
        if (!(s.request == r)) throw StructuralError("run_policy: replay out of step with trace");
        if (!r.has_content()) continue;
        requests.push_back(r);
        decisions.push_back(s.decision);
      }
      before.assign(requests.size(), state.remaining);
    } else {
      for (const Request& r : events) {
        if (r.has_content()) requests.push_back(r);
      }
      std::vector<Money>* rec = config.record_decisions ? &before : nullptr;
      switch (config.policy) {
        case Policy::lyapunov:
          decisions = lyapunov_impl(requests, state, plan, catalog, config.phi,
                                    config.budget_mode, rec);
          break;
        case Policy::greedy:
          decisions = greedy_impl(requests, state.remaining, plan, catalog, rec);
          break;
        case Policy::avg_greedy:
          allowance += run.slot_budget;
          decisions = greedy_impl(requests, std::min(allowance, state.remaining), plan,
                                  catalog, rec);
          break;
        case Policy::offline_replay:
          break;
      }
    }
    for (std::size_t i = 0; i < requests.size(); ++i) {
      slot_decisions.push_back({requests[i], decisions[i]});
    }
    const SlotPayoff pay = slot_payoff(slot_decisions, catalog, plan);
    run.slots.push_back({t, pay.value, pay.cost, state.q});
    if (config.record_decisions) {
      for (std::size_t i = 0; i < slot_decisions.size(); ++i) {
        run.decisions.push_back({slot_decisions[i], state.q, before[i]});
      }
    }
    for (const Sponsorship& s : slot_decisions) {
      if (s.decision.sponsored()) ++run.sponsored;
    }
    run.requests += static_cast<std::int64_t>(requests.size());
    run.total_value += pay.value;
    run.total_cost += pay.cost;
    if (config.policy == Policy::avg_greedy) allowance -= pay.cost;
    // Baselines and replays never exceed the remaining budget by
    // construction; only the Lyapunov rule may run in average mode.
    const BudgetMode mode =
        config.policy == Policy::lyapunov ? config.budget_mode : BudgetMode::hard;
    state = queue_update(state, pay.cost, mode);
  }
  run.final_queue = state.q;
  return run;
}

}  // namespace edgesponsor
