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

// Offline benchmark: the best joint caching/sponsoring outcome with full
// knowledge of the trace.
//
// The per-request problem only depends on the request counts N[l, s]: a
// cached (l, s) serves all of its requests over WiFi for the one-time cost
// alpha*C_s, and an uncached one sponsors some fraction X[l, s] of its
// requests over cellular. solve_reduced() solves that aggregated mixed
// integer program exactly; brute_force_joint() enumerates the per-request
// problem directly and serves as its oracle on tiny traces.

#ifndef EDGESPONSOR_OFFLINE_HPP_
#define EDGESPONSOR_OFFLINE_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "edgesponsor/model.hpp"
#include "edgesponsor/workload.hpp"

namespace edgesponsor {

struct ReducedInstance {
  DemandMatrix counts;  // row 0 (uncovered) is cellular-only demand
  Catalog catalog;
  Money budget;
  bool allow_caching = true;  // false gives the pure-sponsoring benchmark
};

struct ReducedSolution {
  CacheBits z;             // L x S placement
  Grid<Money> counts;      // (L+1) x S counts as seen by the solver
  Grid<Money> cell_spend;  // (L+1) x S cellular budget of each cell
  Money objective;         // un-normalized: value - cellular cost - gamma
  Money gamma;
  Money beta;
  bool integral = true;    // every cell's spend buys whole requests
  std::int64_t nodes = 0;  // branch-and-bound nodes explored

  int locations() const { return z.rows(); }
  int contents() const { return z.cols(); }
  bool cached(int location, int content) const {
    return location > 0 && z(location - 1, content - 1) != 0;
  }
  // Fraction X[l, s] of the cell's requests sponsored over cellular.
  double x(int location, int content, const Catalog& catalog) const;
  // floor(X[l, s] * N[l, s]): requests the expansion actually sponsors.
  std::int64_t sponsored_requests(int location, int content, const Catalog& catalog) const;
};

struct SolverOptions {
  std::int64_t node_limit = 20'000'000;
};

// Exact optimum of the aggregated problem. Branches on the cache bits;
// with the bits fixed the cellular part is a fractional knapsack solved
// greedily by (V - C)/C (ties: larger N, then lower (l, s)). Node bounds
// come from the LP relaxation of the remaining bits. Throws ValidationError
// for a negative budget and Error when the node limit is exceeded.
ReducedSolution solve_reduced(const ReducedInstance& instance,
                              const SolverOptions& options = {});

struct JointSolution {
  std::vector<Sponsorship> decisions;  // one per trace event, trace order
  CachePlan plan;
  Money total;       // un-normalized payoff
  double objective;  // total / horizon
  Money spend;       // cellular cost + gamma
};

struct BruteForceOptions {
  // Cap on 2^(L*S) times the product over contents of (requests + 1).
  std::uint64_t max_assignments = 1ULL << 20;
};

// Exhaustive optimum of the per-request problem. Throws SizeLimitError
// with the instance size when it exceeds the cap.
JointSolution brute_force_joint(const Trace& trace, const Catalog& catalog, Money budget,
                                const BruteForceOptions& options = {});

// Per-request decisions realizing a reduced solution on its trace: cached
// cells go over WiFi, uncached cells sponsor floor(X*N) uniformly chosen
// requests over cellular. Throws StructuralError when the trace's counts
// differ from the ones the solution was computed for.
std::vector<Sponsorship> expand_solution(const ReducedSolution& solution,
                                         const Trace& trace, const Catalog& catalog,
                                         std::uint64_t seed);

// CSV `location,content,Z,X` over non-trivial cells, with objective, gamma
// and beta in a metadata line.
void save_solution(const ReducedSolution& solution, const Catalog& catalog,
                   const std::filesystem::path& path);

}  // namespace edgesponsor

#endif  // EDGESPONSOR_OFFLINE_HPP_
