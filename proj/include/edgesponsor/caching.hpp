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

// Stage-I cache planning from estimated demand.

#ifndef EDGESPONSOR_CACHING_HPP_
#define EDGESPONSOR_CACHING_HPP_

#include <cstdint>

#include "edgesponsor/model.hpp"
#include "edgesponsor/offline.hpp"
#include "edgesponsor/workload.hpp"

namespace edgesponsor {

enum class Provenance { iid, markov, oracle };

struct EstimatedDemand {
  DemandMatrix counts;
  Provenance provenance = Provenance::oracle;
};

// Expected counts of the i.i.d. scenario: T * sum_u mu[u,s] * eta[u,l],
// including the uncovered row l = 0.
EstimatedDemand estimate_iid(const IidProfile& profile, int horizon);

// Expected next-period counts sum_M P(M | previous) * M. The previous
// counts must be integral and inside the kernel support.
EstimatedDemand estimate_markov(const DemandMatrix& previous, const MarkovKernel& kernel);

// Realized counts treated as a perfect forecast.
EstimatedDemand oracle_estimate(const Trace& trace);

// Multiplies each count by exp(sigma * Z), Z standard normal, drawn in
// (location, content) order from `seed`. Models forecast error.
DemandMatrix perturb_counts(const DemandMatrix& counts, double sigma, std::uint64_t seed);

// Solves the reduced problem on the estimate and keeps only the placement.
// The cellular part is dropped; sponsoring is decided online.
CachePlan plan_cache(const EstimatedDemand& estimate, const Catalog& catalog, Money budget,
                     const SolverOptions& options = {});

}  // namespace edgesponsor

#endif  // EDGESPONSOR_CACHING_HPP_
