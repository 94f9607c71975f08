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

// Stage-II online sponsoring.
//
// The Lyapunov policy keeps a virtual queue q of overspending against the
// per-slot budget share b = (B - gamma) / T:
//
//     q <- max(q - b, 0) + C[t]
//
// and in every slot minimizes the linearized drift-plus-penalty
// q * (C[t] - b) - phi * (V[t] - C[t]). The minimization separates per
// request: WiFi scores phi*V (cached copies only), cellular scores
// phi*(V - C) - q*C, doing nothing scores 0.
//
// Greedy and average-greedy are the comparison baselines.

#ifndef EDGESPONSOR_ONLINE_HPP_
#define EDGESPONSOR_ONLINE_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgesponsor/model.hpp"

namespace edgesponsor {

enum class Policy { lyapunov, greedy, avg_greedy, offline_replay };
// hard: a cellular sponsor is only taken if it fits the remaining budget.
// average: only the queue disciplines spending.
enum class BudgetMode { hard, average };

std::string_view to_string(Policy p);
Policy parse_policy(std::string_view name);
std::string_view to_string(BudgetMode m);
BudgetMode parse_budget_mode(std::string_view name);

struct QueueState {
  Money q;
  Money slot_budget;
  Money remaining;
};

// q' = max(q - slot_budget, 0) + slot_cost; remaining' = remaining - slot_cost.
// In hard mode a cost above the remaining budget is a logic error and throws.
QueueState queue_update(const QueueState& state, Money slot_cost,
                        BudgetMode mode = BudgetMode::hard);

struct PolicyConfig {
  Policy policy = Policy::lyapunov;
  Factor phi = Factor::from_integer(100);
  BudgetMode budget_mode = BudgetMode::hard;
  bool record_decisions = false;
  // offline_replay only: one decision per trace event, in trace order.
  std::vector<Sponsorship> replay;
};

// 100 * mean(V) / mean(C).
Factor default_phi(const Catalog& catalog);

// Drift bound constant 1/2 * (b^2 + (U * C_max)^2). Diagnostic only; it
// does not enter the decision rule.
double drift_constant(Money slot_budget, int users, const Catalog& catalog);

// Drift-plus-penalty decisions for one slot, aligned with `requests`.
// Ties: WiFi before cellular; cellular needs a strictly positive score.
// Under the hard cap, cellular candidates are admitted in decreasing score
// order (lower user id first on ties) while they fit state.remaining.
std::vector<Decision> lyapunov_decide(std::span<const Request> requests,
                                      const QueueState& state, const CachePlan& plan,
                                      const Catalog& catalog, Factor phi,
                                      BudgetMode mode = BudgetMode::hard);

// Cached requests over WiFi, then cellular sponsors by decreasing V - C
// (lower user id first) while the margin is positive and the cost fits.
std::vector<Decision> greedy_decide(std::span<const Request> requests, Money remaining,
                                    const CachePlan& plan, const Catalog& catalog);

// Greedy with cellular spend capped at the slot allowance.
std::vector<Decision> avg_greedy_decide(std::span<const Request> requests, Money allowance,
                                        const CachePlan& plan, const Catalog& catalog);

// Runs a policy over every slot of the trace. Unspent average-greedy
// allowance carries to the next slot. Throws ValidationError when gamma
// exceeds the budget and StructuralError on mismatched dimensions.
PolicyRun run_policy(const Trace& trace, const CachePlan& plan, const Catalog& catalog,
                     const PolicyConfig& config, Money budget);

}  // namespace edgesponsor

#endif  // EDGESPONSOR_ONLINE_HPP_
