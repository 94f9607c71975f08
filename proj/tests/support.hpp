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

// Builders and brute-force oracles shared by the unit and acceptance tests.
// The oracles deliberately avoid the library's solver and policy code.

#ifndef EDGESPONSOR_TESTS_SUPPORT_HPP_
#define EDGESPONSOR_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "edgesponsor/model.hpp"
#include "edgesponsor/online.hpp"
#include "edgesponsor/random.hpp"
#include "edgesponsor/workload.hpp"

namespace edgesponsor::testing {

inline Money M(const char* text) { return Money::parse(text); }
template <std::integral I>
Money M(I units) {
  return Money::from_integer(static_cast<std::int64_t>(units));
}

inline Catalog make_test_catalog(std::vector<const char*> values, std::vector<const char*> costs,
                                 const char* alpha = "3") {
  std::vector<Money> v, c;
  for (const char* x : values) v.push_back(M(x));
  for (const char* x : costs) c.push_back(M(x));
  return Catalog(std::move(v), std::move(c), Factor::parse(alpha));
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("edgesponsor_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Random catalog with values/costs on a coarse grid so that ties and
// integral fills happen often.
inline Catalog random_catalog(int contents, Rng& rng, const char* alpha = "3") {
  std::vector<Money> v, c;
  for (int s = 0; s < contents; ++s) {
    v.push_back(Money::from_raw(static_cast<std::int64_t>(rng.below(9)) * 500'000));  // 0..4
    c.push_back(Money::from_raw(static_cast<std::int64_t>(1 + rng.below(6)) * 500'000));  // 0.5..3
  }
  return Catalog(std::move(v), std::move(c), Factor::parse(alpha));
}

// Random trace with at most one event per (user, slot); some idle cells,
// some requests outside WiFi coverage.
inline Trace random_trace(int users, int slots, int contents, int locations, Rng& rng,
                          double request_prob = 0.8) {
  std::vector<Request> events;
  for (int t = 1; t <= slots; ++t) {
    for (int u = 1; u <= users; ++u) {
      const double draw = rng.uniform();
      if (draw > 0.95) continue;  // no event at all
      Request r{t, u, 0, static_cast<int>(rng.below(static_cast<std::uint64_t>(locations + 1)))};
      if (draw < request_prob) r.content = 1 + static_cast<int>(rng.below(contents));
      events.push_back(r);
    }
  }
  return Trace(slots, users, contents, locations, std::move(events));
}

// ---- reduced-problem oracle ----

// Value of the cellular fractional knapsack over the uncached cells:
// positive-margin cells by ratio (V - C)/C, ties by larger N then lower
// (location, content); the last cell may be partially funded, its value
// floored to the currency grid.
inline Money cellular_fill(const DemandMatrix& counts, const Catalog& catalog, Money left,
                           const std::vector<std::uint8_t>& cached) {
  struct Cell {
    int idx;
    Money n, w, p;
  };
  std::vector<Cell> cells;
  const int S = counts.contents();
  for (int l = 0; l <= counts.locations(); ++l) {
    for (int s = 1; s <= S; ++s) {
      const int idx = l * S + (s - 1);
      if (l > 0 && cached[static_cast<std::size_t>((l - 1) * S + (s - 1))]) continue;
      const Money n = Money::from_double(counts.at(l, s));
      if (n <= Money{}) continue;
      const Money w = n * catalog.cell_cost(s);
      const Money p = n * catalog.value(s) - w;
      if (p <= Money{} || w <= Money{}) continue;
      cells.push_back({idx, n, w, p});
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    const int128 lhs = static_cast<int128>(a.p.raw()) * b.w.raw();
    const int128 rhs = static_cast<int128>(b.p.raw()) * a.w.raw();
    if (lhs != rhs) return lhs > rhs;
    if (a.n != b.n) return a.n > b.n;
    return a.idx < b.idx;
  });
  Money value;
  for (const Cell& c : cells) {
    if (left <= Money{}) break;
    if (c.w <= left) {
      value += c.p;
      left -= c.w;
    } else {
      const int128 num = static_cast<int128>(left.raw()) * c.p.raw();
      value += Money::from_raw(static_cast<std::int64_t>(num / c.w.raw()));
      left = Money{};
    }
  }
  return value;
}

// Exhaustive enumeration of every cache placement over cells l >= 1.
inline Money exhaustive_reduced(const DemandMatrix& counts, const Catalog& catalog, Money budget,
                                bool allow_caching = true) {
  const int L = counts.locations();
  const int S = counts.contents();
  const int bits = allow_caching ? L * S : 0;
  Money best;
  bool have = false;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    std::vector<std::uint8_t> cached(static_cast<std::size_t>(L * S), 0);
    Money gamma, value;
    for (int b = 0; b < bits; ++b) {
      if (!((mask >> b) & 1)) continue;
      cached[static_cast<std::size_t>(b)] = 1;
      const int l = b / S + 1;
      const int s = b % S + 1;
      gamma += catalog.cache_cost(s);
      value += Money::from_double(counts.at(l, s)) * catalog.value(s) - catalog.cache_cost(s);
    }
    if (gamma > budget) continue;
    value += cellular_fill(counts, catalog, budget - gamma, cached);
    if (!have || value > best) {
      best = value;
      have = true;
    }
  }
  return best;
}

// ---- per-request oracles ----

// Best option of one request by enumeration: none scores 0, cellular
// phi*(V-C) - q*C when affordable, WiFi phi*V when cached. WiFi wins ties;
// cellular must beat doing nothing strictly.
inline Decision enumerate_options(const Request& r, Money q, Money remaining, Factor phi,
                                  const CachePlan& plan, const Catalog& catalog) {
  const Money v = catalog.value(r.content);
  const Money c = catalog.cell_cost(r.content);
  const int128 none = 0;
  const int128 cell = static_cast<int128>(phi.raw()) * (v - c).raw() -
                      static_cast<int128>(q.raw()) * c.raw();
  const int128 wifi = static_cast<int128>(phi.raw()) * v.raw();
  Decision best;
  int128 best_score = none;
  if (c <= remaining && cell > best_score) {
    best = {true, false};
    best_score = cell;
  }
  if (plan.cached(r.location, r.content) && wifi >= best_score) best = {false, true};
  return best;
}

// Queue law replay: q[1] = 0, q[t+1] = max(q[t] - b, 0) + C[t].
inline std::vector<Money> replay_queue(const PolicyRun& run) {
  std::vector<Money> q;
  Money cur;
  for (const SlotRecord& s : run.slots) {
    q.push_back(cur);
    cur = std::max(cur - run.slot_budget, Money{}) + s.cost;
  }
  q.push_back(cur);
  return q;
}

}  // namespace edgesponsor::testing

#endif  // EDGESPONSOR_TESTS_SUPPORT_HPP_
