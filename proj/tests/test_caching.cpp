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

#include <cmath>

#include "edgesponsor/caching.hpp"
#include "edgesponsor/errors.hpp"
#include "edgesponsor/offline.hpp"
#include "support.hpp"

using namespace edgesponsor;
using testing::M;
using testing::make_test_catalog;

TEST_CASE("iid estimate of degenerate profiles") {
  {
    Grid<double> rq(1, 3, 0.0), lc(1, 3, 0.0);
    rq(0, 2) = 1.0;
    lc(0, 1) = 1.0;
    const auto e = estimate_iid(IidProfile(rq, lc), 100);
    CHECK(e.provenance == Provenance::iid);
    CHECK(e.counts.at(1, 2) == 100.0);
    CHECK(e.counts.total() == 100.0);
  }
  {
    Grid<double> rq(2, 2, 0.5), lc(2, 2, 0.5);
    const auto e = estimate_iid(IidProfile(rq, lc), 100);
    CHECK(e.counts.at(1, 1) == doctest::Approx(50.0));
    CHECK(e.counts.at(0, 1) == doctest::Approx(50.0));
  }
}

TEST_CASE("iid estimate is linear in the horizon") {
  const IidProfile p = make_zipf_profile({5, 6, 4, 0.5, 0.6, 0.8, 2}, 3);
  const auto a = estimate_iid(p, 10);
  const auto b = estimate_iid(p, 30);
  for (int l = 0; l <= 4; ++l) {
    for (int s = 1; s <= 6; ++s) CHECK(b.counts.at(l, s) == doctest::Approx(3 * a.counts.at(l, s)));
  }
}

TEST_CASE("iid estimate matches the Monte-Carlo mean within 3 sigma") {
  const IidProfile p = make_zipf_profile({3, 3, 2, 0.7, 0.7, 0.8, 2}, 12);
  const int T = 20;
  const int runs = 2000;
  const auto e = estimate_iid(p, T);
  DemandMatrix sum(2, 3);
  for (int seed = 0; seed < runs; ++seed) {
    const DemandMatrix d = aggregate_counts(generate_iid_trace(p, T, 1000 + seed));
    for (int l = 0; l <= 2; ++l) {
      for (int s = 1; s <= 3; ++s) sum.at(l, s) += d.at(l, s);
    }
  }
  for (int l = 0; l <= 2; ++l) {
    for (int s = 1; s <= 3; ++s) {
      double var = 0;
      for (int u = 1; u <= 3; ++u) {
        const double q = p.request_prob(u, s) * p.location_prob(u, l);
        var += T * q * (1 - q);
      }
      CAPTURE(l);
      CAPTURE(s);
      CHECK(std::abs(sum.at(l, s) / runs - e.counts.at(l, s)) <= 3 * std::sqrt(var / runs));
    }
  }
}

TEST_CASE("markov estimate") {
  DemandMatrix prev(2, 2);
  prev.at(1, 1) = 10;
  prev.at(2, 2) = 3;
  prev.at(0, 1) = 1;
  CHECK(estimate_markov(prev, MarkovKernel::identity(20)).counts == prev);
  const auto e = estimate_markov(prev, MarkovKernel::poisson_drift(0.5, 1.0, 200));
  CHECK(e.provenance == Provenance::markov);
  CHECK(e.counts.at(1, 1) == doctest::Approx(6.0));
  CHECK(e.counts.at(2, 2) == doctest::Approx(2.5));
  const auto z = estimate_markov(DemandMatrix(1, 1), MarkovKernel::poisson_drift(1.0, 0.0, 5));
  CHECK(z.counts.at(1, 1) == 0.0);
  CHECK_THROWS_AS(estimate_markov(prev, MarkovKernel::poisson_drift(1, 0, 9)), ValidationError);
  prev.at(1, 2) = 0.5;
  CHECK_THROWS_AS(estimate_markov(prev, MarkovKernel::identity(20)), ValidationError);
}

TEST_CASE("perturbation is seeded and multiplicative") {
  DemandMatrix d(2, 3);
  d.at(1, 1) = 10;
  d.at(2, 3) = 4;
  CHECK(perturb_counts(d, 0.0, 5) == d);
  const DemandMatrix a = perturb_counts(d, 0.5, 5);
  CHECK(a == perturb_counts(d, 0.5, 5));
  CHECK_FALSE(a == perturb_counts(d, 0.5, 6));
  CHECK(a.at(1, 2) == 0.0);
  CHECK(a.at(1, 1) > 0.0);
  CHECK_THROWS_AS(perturb_counts(d, -1, 1), ValidationError);
}

TEST_CASE("plan cache examples") {
  const Catalog c = make_test_catalog({"2", "1"}, {"1", "1"}, "3");
  {
    const CachePlan plan = plan_cache({DemandMatrix(2, 2), Provenance::iid}, c, M(50));
    CHECK(plan.cached_count() == 0);
    CHECK(plan.gamma() == M(0));
  }
  {
    DemandMatrix d(2, 2);
    d.at(2, 1) = 10;  // 10 * 2 > 3 * 1, and 3 <= B
    const CachePlan plan = plan_cache({d, Provenance::iid}, c, M(3));
    CHECK(plan.cached(2, 1));
    CHECK(plan.cached_count() == 1);
    CHECK(plan.gamma() == M(3));
    CHECK(plan_cache({d, Provenance::iid}, c, M(0)).cached_count() == 0);
  }
  CHECK_THROWS_AS(plan_cache({DemandMatrix(2, 3), Provenance::iid}, c, M(3)), StructuralError);
}

TEST_CASE("plan on oracle counts equals the offline placement") {
  Rng rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    const Catalog c = testing::random_catalog(4, rng);
    const Trace t = testing::random_trace(10, 8, 4, 3, rng);
    const Money budget = Money::from_integer(static_cast<std::int64_t>(rng.below(25)));
    const EstimatedDemand oracle = oracle_estimate(t);
    CHECK(oracle.provenance == Provenance::oracle);
    const CachePlan plan = plan_cache(oracle, c, budget);
    const auto sol = solve_reduced({aggregate_counts(t), c, budget});
    CHECK(plan.bits() == sol.z);
    CHECK(plan.gamma() == sol.gamma);
    CHECK(plan.gamma() <= budget);
  }
}

TEST_CASE("identity kernel estimate reproduces the next day") {
  DemandMatrix base(3, 4);
  base.at(1, 2) = 5;
  base.at(3, 4) = 2;
  const MarkovKernel k = MarkovKernel::identity(10);
  const auto days = generate_day_sequence(base, k, 2, 4, 5, 3);
  CHECK(estimate_markov(base, k).counts == aggregate_counts(days[1]));
}
