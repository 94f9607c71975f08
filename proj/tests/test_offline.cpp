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

#include <set>

#include "edgesponsor/csv.hpp"
#include "edgesponsor/errors.hpp"
#include "edgesponsor/offline.hpp"
#include "support.hpp"

using namespace edgesponsor;
using testing::M;
using testing::make_test_catalog;

namespace {

DemandMatrix one_cell(int l, int s, int L, int S, double n) {
  DemandMatrix d(L, S);
  d.at(l, s) = n;
  return d;
}

// Spend and constraint checks of a per-request decision set.
Money check_decisions(const std::vector<Sponsorship>& ds, const CachePlan& plan,
                      const Catalog& catalog) {
  Money spend = plan.gamma();
  for (const Sponsorship& s : ds) {
    validate_decision(s, plan);
    if (s.decision.cellular) spend += catalog.cell_cost(s.request.content);
  }
  return spend;
}

}  // namespace

TEST_CASE("brute force with zero budget sponsors nothing") {
  const Catalog c = make_test_catalog({"3", "2"}, {"1", "1"});
  const Trace t(2, 2, 2, 1, {{1, 1, 1, 1}, {1, 2, 2, 0}, {2, 1, 1, 1}});
  const JointSolution j = brute_force_joint(t, c, M(0));
  CHECK(j.total == M(0));
  CHECK(j.objective == 0.0);
  CHECK(j.plan.cached_count() == 0);
  for (const auto& s : j.decisions) CHECK_FALSE(s.decision.sponsored());
}

TEST_CASE("brute force prefers sponsoring when caching is unaffordable") {
  const Catalog c = make_test_catalog({"3"}, {"1"}, "5");
  const Trace t(1, 1, 1, 1, {{1, 1, 1, 1}});
  const JointSolution j = brute_force_joint(t, c, M(1));
  CHECK(j.total == M(2));
  CHECK(j.objective == doctest::Approx(2.0));
  REQUIRE(j.decisions.size() == 1);
  CHECK(j.decisions[0].decision.cellular);
  CHECK(j.spend == M(1));
}

TEST_CASE("brute force refuses oversized instances") {
  const Catalog c = make_test_catalog({"3", "3", "3"}, {"1", "1", "1"});
  Rng rng(1);
  const Trace t = testing::random_trace(6, 6, 3, 4, rng);
  CHECK_THROWS_AS(brute_force_joint(t, c, M(5), {1000}), SizeLimitError);
  CHECK_THROWS_AS(brute_force_joint(t, c, M(-1)), ValidationError);
}

TEST_CASE("reduced solver examples") {
  {
    const Catalog c = make_test_catalog({"2"}, {"1"}, "3");
    const auto sol = solve_reduced({one_cell(1, 1, 1, 1, 10), c, M(3)});
    CHECK(sol.objective == M(17));
    CHECK(sol.cached(1, 1));
    CHECK(sol.gamma == M(3));
    CHECK(sol.beta == M(0));
  }
  {
    // V <= C everywhere and N*V <= alpha*C: nothing pays
    const Catalog c = make_test_catalog({"1", "0.5"}, {"1", "2"}, "3");
    DemandMatrix d(1, 2);
    d.at(1, 1) = 3;
    d.at(1, 2) = 4;
    d.at(0, 1) = 5;
    const auto sol = solve_reduced({d, c, M(100)});
    CHECK(sol.objective == M(0));
    CHECK(sol.gamma == M(0));
    CHECK(sol.beta == M(0));
  }
  {
    // cellular only, fractional X
    const Catalog c = make_test_catalog({"2"}, {"1"}, "100");
    const auto sol = solve_reduced({one_cell(1, 1, 1, 1, 10), c, M(3)});
    CHECK(sol.objective == M(3));
    CHECK(sol.x(1, 1, c) == doctest::Approx(0.3));
    CHECK(sol.integral);
  }
  {
    const Catalog c = make_test_catalog({"2"}, {"1"});
    CHECK_THROWS_AS(solve_reduced({one_cell(1, 1, 1, 1, 1), c, M(-1)}), ValidationError);
    CHECK_THROWS_AS(solve_reduced({one_cell(1, 1, 1, 2, 1), c, M(1)}), StructuralError);
  }
}

TEST_CASE("uncovered demand is only sponsored over cellular") {
  const Catalog c = make_test_catalog({"2"}, {"1"}, "2");
  const auto sol = solve_reduced({one_cell(0, 1, 1, 1, 10), c, M(4)});
  CHECK_FALSE(sol.cached(1, 1));
  CHECK(sol.objective == M(4));
  CHECK(sol.sponsored_requests(0, 1, c) == 4);
}

TEST_CASE("pure benchmark never caches") {
  const Catalog c = make_test_catalog({"2"}, {"1"}, "3");
  ReducedInstance inst{one_cell(1, 1, 1, 1, 10), c, M(3)};
  inst.allow_caching = false;
  const auto sol = solve_reduced(inst);
  CHECK(sol.gamma == M(0));
  CHECK(sol.objective == M(3));
}

TEST_CASE("reduced solver matches exhaustive placement enumeration") {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int L = 1 + static_cast<int>(rng.below(3));
    const int S = 1 + static_cast<int>(rng.below(4));
    if (L * S > 12) continue;
    const Catalog c = testing::random_catalog(S, rng, trial % 2 ? "2" : "3.5");
    DemandMatrix d(L, S);
    for (int l = 0; l <= L; ++l) {
      for (int s = 1; s <= S; ++s) d.at(l, s) = static_cast<double>(rng.below(7));
    }
    const Money budget = Money::from_raw(static_cast<std::int64_t>(rng.below(40)) * 500'000);
    for (bool caching : {true, false}) {
      ReducedInstance inst{d, c, budget};
      inst.allow_caching = caching;
      const auto sol = solve_reduced(inst);
      CAPTURE(trial);
      CHECK(sol.objective == testing::exhaustive_reduced(d, c, budget, caching));
      CHECK(sol.gamma + sol.beta <= budget);
      ++checked;
    }
  }
  CHECK(checked >= 200);
}

TEST_CASE("objective is non-decreasing in the budget") {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const Catalog c = testing::random_catalog(5, rng);
    DemandMatrix d(4, 5);
    for (int l = 0; l <= 4; ++l) {
      for (int s = 1; s <= 5; ++s) d.at(l, s) = static_cast<double>(rng.below(12));
    }
    Money prev = Money::from_integer(-1);
    for (int b = 0; b <= 60; b += 3) {
      const Money obj = solve_reduced({d, c, M(b)}).objective;
      CHECK(obj >= prev);
      prev = obj;
    }
  }
}

TEST_CASE("expansion sponsors floor(X*N) requests") {
  const Catalog c = make_test_catalog({"2"}, {"1"}, "100");
  const Trace t(4, 1, 1, 1, {{1, 1, 1, 1}, {2, 1, 1, 1}, {3, 1, 1, 1}, {4, 1, 1, 1}});
  const ReducedSolution sol = solve_reduced({aggregate_counts(t), c, M(2)});
  REQUIRE(sol.x(1, 1, c) == doctest::Approx(0.5));
  std::set<std::vector<bool>> patterns;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto ds = expand_solution(sol, t, c, seed);
    int count = 0;
    std::vector<bool> pattern;
    for (const auto& s : ds) {
      count += s.decision.cellular;
      pattern.push_back(s.decision.cellular);
    }
    CHECK(count == 2);
    patterns.insert(pattern);
  }
  CHECK(patterns.size() > 1);
}

TEST_CASE("expansion of full and empty cells") {
  const Catalog c = make_test_catalog({"2", "3"}, {"1", "1"}, "100");
  const Trace t(3, 2, 2, 1, {{1, 1, 1, 1}, {1, 2, 2, 1}, {2, 1, 1, 1}, {3, 2, 0, 0}});
  const auto sol = solve_reduced({aggregate_counts(t), c, M(3)});
  // both content-1 requests (X = 1), the content-2 one too
  const auto all = expand_solution(sol, t, c, 1);
  for (const auto& s : all) CHECK(s.decision.cellular == s.request.has_content());
  const auto none = expand_solution(solve_reduced({aggregate_counts(t), c, M(0)}), t, c, 1);
  for (const auto& s : none) CHECK_FALSE(s.decision.sponsored());
}

TEST_CASE("expansion rejects a mismatched trace") {
  const Catalog c = make_test_catalog({"2"}, {"1"});
  const Trace t(2, 1, 1, 1, {{1, 1, 1, 1}});
  const auto sol = solve_reduced({aggregate_counts(t), c, M(2)});
  const Trace other(2, 1, 1, 1, {{1, 1, 1, 1}, {2, 1, 1, 1}});
  CHECK_THROWS_AS(expand_solution(sol, other, c, 1), StructuralError);
  const Trace wider(2, 1, 1, 2, {{1, 1, 1, 1}});
  CHECK_THROWS_AS(expand_solution(sol, wider, c, 1), StructuralError);
}

TEST_CASE("expanded decisions are feasible and match the objective") {
  Rng rng(91);
  for (int trial = 0; trial < 100; ++trial) {
    const Catalog c = testing::random_catalog(3, rng);
    const Trace t = testing::random_trace(4, 5, 3, 2, rng);
    const Money budget = Money::from_raw(static_cast<std::int64_t>(rng.below(30)) * 500'000);
    const auto sol = solve_reduced({aggregate_counts(t), c, budget});
    const auto ds = expand_solution(sol, t, c, trial);
    const CachePlan plan(sol.z, c);
    CHECK(check_decisions(ds, plan, c) <= budget);
    if (sol.integral) {
      Money value, cost;
      for (const auto& s : ds) {
        if (s.decision.sponsored()) value += c.value(s.request.content);
        if (s.decision.cellular) cost += c.cell_cost(s.request.content);
      }
      CHECK(value - cost - plan.gamma() == sol.objective);
    }
  }
}

TEST_CASE("brute force agrees with the reduced solver on integral optima") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Catalog c = testing::random_catalog(2, rng);
    const Trace t = testing::random_trace(3, 4, 2, 2, rng);
    const Money budget = Money::from_integer(static_cast<std::int64_t>(rng.below(10)));
    const auto joint = brute_force_joint(t, c, budget);
    const auto sol = solve_reduced({aggregate_counts(t), c, budget});
    CAPTURE(trial);
    CHECK(sol.objective >= joint.total);
    if (sol.integral) CHECK(sol.objective == joint.total);
    CHECK(check_decisions(joint.decisions, joint.plan, c) == joint.spend);
    CHECK(joint.spend <= budget);
  }
}

TEST_CASE("solution file lists cached and sponsored cells") {
  testing::TempDir dir("sol");
  const Catalog c = make_test_catalog({"2", "3"}, {"1", "1"}, "3");
  DemandMatrix d(1, 2);
  d.at(1, 1) = 10;
  d.at(0, 2) = 2;
  const auto sol = solve_reduced({d, c, M(4)});
  save_solution(sol, c, dir / "s.csv");
  csv::Reader in(dir / "s.csv");
  in.expect_header({"location", "content", "Z", "X"});
  CHECK(in.meta("objective") == sol.objective.to_string());
  int rows = 0;
  while (in.next()) ++rows;
  CHECK(rows == 2);
}
