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

// Domain types shared by every stage: the content catalog, request traces,
// per-request sponsoring decisions, the edge cache plan and the payoff and
// budget arithmetic over a finished policy run.
//
// Identifiers are 1-based as in the problem statement. Content 0 means "no
// request in this slot" and location 0 means "no WiFi coverage".

#ifndef EDGESPONSOR_MODEL_HPP_
#define EDGESPONSOR_MODEL_HPP_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "edgesponsor/decimal.hpp"

namespace edgesponsor {

using Money = Decimal<6>;
// Dimensionless multipliers (alpha, phi) share the currency scale.
using Factor = Decimal<6>;

// Dense row-major matrix with 0-based indices.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int r, int c) { return data_[index(r, c)]; }
  const T& operator()(int r, int c) const { return data_[index(r, c)]; }
  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

class Catalog {
 public:
  // values[s-1] and cell_costs[s-1] describe content s.
  Catalog(std::vector<Money> values, std::vector<Money> cell_costs, Factor alpha);

  int size() const { return static_cast<int>(values_.size()); }
  Money value(int content) const { return values_.at(content - 1); }
  Money cell_cost(int content) const { return cell_costs_.at(content - 1); }
  // One-time cost of placing the content on one WiFi network.
  Money cache_cost(int content) const { return alpha_ * cell_cost(content); }
  Factor alpha() const { return alpha_; }
  Money max_cell_cost() const;
  Money mean_value() const;
  Money mean_cell_cost() const;

  friend bool operator==(const Catalog&, const Catalog&) = default;

 private:
  std::vector<Money> values_;
  std::vector<Money> cell_costs_;
  Factor alpha_;
};

// CSV with header `content,value,cell_cost`; alpha comes from the run config.
Catalog load_catalog(const std::filesystem::path& path, Factor alpha);
void save_catalog(const Catalog& catalog, const std::filesystem::path& path);

struct Request {
  int slot = 1;
  int user = 1;
  int content = 0;
  int location = 0;

  bool has_content() const { return content != 0; }
  friend auto operator<=>(const Request&, const Request&) = default;
};

class Trace {
 public:
  Trace() = default;
  // Validates ids against the bounds, (slot, user) ordering and uniqueness.
  Trace(int horizon, int users, int contents, int locations,
        std::vector<Request> events);

  int horizon() const { return horizon_; }
  int users() const { return users_; }
  int contents() const { return contents_; }
  int locations() const { return locations_; }
  std::span<const Request> events() const { return events_; }
  // Events of slot t (1-based), in user order.
  std::span<const Request> slot_events(int slot) const;
  std::int64_t request_count() const;

  friend bool operator==(const Trace& a, const Trace& b) {
    return a.horizon_ == b.horizon_ && a.users_ == b.users_ &&
           a.contents_ == b.contents_ && a.locations_ == b.locations_ &&
           a.events_ == b.events_;
  }

 private:
  int horizon_ = 0;
  int users_ = 0;
  int contents_ = 0;
  int locations_ = 0;
  std::vector<Request> events_;
  std::vector<std::size_t> slot_begin_;  // size horizon + 1
};

struct Decision {
  bool cellular = false;
  bool wifi = false;

  bool sponsored() const { return cellular || wifi; }
  friend bool operator==(const Decision&, const Decision&) = default;
};

struct Sponsorship {
  Request request;
  Decision decision;
  friend bool operator==(const Sponsorship&, const Sponsorship&) = default;
};

using CacheBits = Grid<std::uint8_t>;  // rows = locations 1..L, cols = contents

// Total WiFi caching cost of a placement. bits.cols() must equal the
// catalog size.
Money caching_cost(const CacheBits& bits, const Catalog& catalog);

class CachePlan {
 public:
  CachePlan() = default;
  CachePlan(CacheBits bits, const Catalog& catalog);
  static CachePlan empty(int locations, int contents);

  int locations() const { return bits_.rows(); }
  int contents() const { return bits_.cols(); }
  // Location 0 never holds a cache.
  bool cached(int location, int content) const {
    return location > 0 && bits_(location - 1, content - 1) != 0;
  }
  Money gamma() const { return gamma_; }
  const CacheBits& bits() const { return bits_; }
  int cached_count() const;

  friend bool operator==(const CachePlan&, const CachePlan&) = default;

 private:
  CacheBits bits_;
  Money gamma_;
};

// CSV `location,content` listing cached pairs, preceded by a metadata line
// `# locations=L,contents=S,gamma=G`. Loading recomputes gamma from the
// catalog and rejects a file whose recorded gamma disagrees.
void save_cache_plan(const CachePlan& plan, const std::filesystem::path& path);
CachePlan load_cache_plan(const std::filesystem::path& path, const Catalog& catalog);

// Throws ConstraintViolation unless x + y <= 1 and y implies a cache hit.
void validate_decision(const Sponsorship& s, const CachePlan& plan);

struct SlotPayoff {
  Money value;
  Money cost;
};

// Value and cellular cost of a set of decisions. WiFi sponsoring has no
// per-slot cost; its price is the plan's one-time gamma.
SlotPayoff slot_payoff(std::span<const Sponsorship> decisions,
                       const Catalog& catalog, const CachePlan& plan);

struct SlotRecord {
  int slot = 0;
  Money value;
  Money cost;
  Money queue;  // virtual queue backlog at the start of the slot
};

struct DecisionRecord {
  Sponsorship sponsorship;
  Money queue;             // backlog the decision was taken against
  Money remaining_before;  // hard residual budget before this decision
};

struct PolicyRun {
  int horizon = 0;
  Money sponsor_budget;  // budget left for sponsoring after caching
  Money slot_budget;     // per-slot share used by the queue update
  std::vector<SlotRecord> slots;
  std::vector<DecisionRecord> decisions;  // filled when recording is enabled
  Money total_value;
  Money total_cost;
  Money final_queue;
  std::int64_t requests = 0;
  std::int64_t sponsored = 0;

  double sponsored_fraction() const {
    return requests == 0 ? 0.0 : static_cast<double>(sponsored) / static_cast<double>(requests);
  }
};

// Un-normalized payoff: total value minus cellular cost minus gamma.
Money net_payoff(const PolicyRun& run, const CachePlan& plan);
// Time-average payoff over the horizon; throws StructuralError when the run
// does not cover exactly `horizon` slots.
double total_payoff(const PolicyRun& run, const CachePlan& plan, int horizon);
// Hard budget: cellular spend plus gamma never above the budget.
bool check_budget(const PolicyRun& run, const CachePlan& plan, Money budget);

// CSV `slot,value,cost,q` with a `# horizon=T,gamma=G,slot_budget=b` line.
void save_run(const PolicyRun& run, const CachePlan& plan,
              const std::filesystem::path& path);
struct PersistedRun {
  PolicyRun run;
  Money gamma;
};
PersistedRun load_run(const std::filesystem::path& path);

}  // namespace edgesponsor

#endif  // EDGESPONSOR_MODEL_HPP_
