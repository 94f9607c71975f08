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

#include "edgesponsor/caching.hpp"

#include <cmath>
#include <map>

#include "edgesponsor/errors.hpp"
#include "edgesponsor/random.hpp"

namespace edgesponsor {

EstimatedDemand estimate_iid(const IidProfile& profile, int horizon) {
  if (horizon < 0) throw ValidationError("estimate_iid: negative horizon");
  DemandMatrix d(profile.locations(), profile.contents());
  for (int u = 1; u <= profile.users(); ++u) {
    for (int l = 0; l <= profile.locations(); ++l) {
      const double eta = profile.location_prob(u, l);
      if (eta == 0.0) continue;
      for (int s = 1; s <= profile.contents(); ++s) {
        d.at(l, s) += profile.request_prob(u, s) * eta;
      }
    }
  }
  for (int l = 0; l <= d.locations(); ++l) {
    for (int s = 1; s <= d.contents(); ++s) d.at(l, s) *= horizon;
  }
  return {std::move(d), Provenance::iid};
}

EstimatedDemand estimate_markov(const DemandMatrix& previous, const MarkovKernel& kernel) {
  if (!previous.is_integral()) {
    throw ValidationError("estimate_markov: previous counts must be integral");
  }
  DemandMatrix d(previous.locations(), previous.contents());
  std::map<int, double> means;
  for (int l = 0; l <= previous.locations(); ++l) {
    for (int s = 1; s <= previous.contents(); ++s) {
      const double raw = previous.at(l, s);
      if (raw > kernel.support_cap()) {
        throw ValidationError("estimate_markov: count " + std::to_string(raw) + " at (" +
                              std::to_string(l) + "," + std::to_string(s) +
                              ") exceeds the kernel support");
      }
      const int n = static_cast<int>(raw);
      auto it = means.find(n);
      if (it == means.end()) it = means.emplace(n, kernel.mean(n)).first;
      d.at(l, s) = it->second;
    }
  }
  return {std::move(d), Provenance::markov};
}

EstimatedDemand oracle_estimate(const Trace& trace) {
  return {aggregate_counts(trace), Provenance::oracle};
}

DemandMatrix perturb_counts(const DemandMatrix& counts, double sigma, std::uint64_t seed) {
  if (sigma < 0) throw ValidationError("perturb_counts: negative sigma");
  DemandMatrix out = counts;
  Rng rng(seed);
  for (int l = 0; l <= out.locations(); ++l) {
    for (int s = 1; s <= out.contents(); ++s) {
      const double noise = std::exp(sigma * rng.normal());
      out.at(l, s) *= noise;
    }
  }
  return out;
}

CachePlan plan_cache(const EstimatedDemand& estimate, const Catalog& catalog, Money budget,
                     const SolverOptions& options) {
  if (estimate.counts.contents() != catalog.size()) {
    throw StructuralError("plan_cache: estimate covers " +
                          std::to_string(estimate.counts.contents()) +
                          " contents, catalog has " + std::to_string(catalog.size()));
  }
  const ReducedSolution sol =
      solve_reduced(ReducedInstance{estimate.counts, catalog, budget, true}, options);
  return CachePlan(sol.z, catalog);
}

}  // namespace edgesponsor
