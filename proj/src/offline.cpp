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

#include "edgesponsor/offline.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "edgesponsor/csv.hpp"
#include "edgesponsor/errors.hpp"
#include "edgesponsor/random.hpp"

namespace edgesponsor {
namespace {

enum class Option : std::uint8_t { none, cell, cache };
enum class State : std::uint8_t { free, zero, one };

// One (location, content) cell of the aggregated problem.
struct Item {
  int row = 0;      // location, 0 = uncovered
  int content = 0;  // 1..S
  int index = 0;    // row * S + content - 1
  Money count;
  Money cell_w, cell_p;    // cellular cost and margin of sponsoring every request
  Money cache_w, cache_p;  // caching cost and net caching payoff
  bool has_cell = false;
  bool has_cache = false;
};

// Incremental step between two options of one item on its LP hull.
struct Segment {
  int item = 0;
  Option from = Option::none;
  Option to = Option::none;
  Money dw, dp;
  bool free_state = false;  // active while the item's bit is free, else while it is 0
};

// p1/w1 > p2/w2 for positive weights.
bool ratio_greater(Money p1, Money w1, Money p2, Money w2) {
  return static_cast<int128>(p1.raw()) * w2.raw() > static_cast<int128>(p2.raw()) * w1.raw();
}
bool ratio_equal(Money p1, Money w1, Money p2, Money w2) {
  return static_cast<int128>(p1.raw()) * w2.raw() == static_cast<int128>(p2.raw()) * w1.raw();
}

// floor(left * p / w) for left, p >= 0, w > 0.
Money fractional_value(Money left, Money p, Money w) {
  const int128 num = static_cast<int128>(left.raw()) * p.raw();
  return Money::from_raw(detail::narrow(num / w.raw()));
}

// Segments past the critical one the incumbent heuristic looks at.
constexpr std::size_t kFillScan = 4096;

class Solver {
 public:
  Solver(const ReducedInstance& instance, const SolverOptions& options)
      : instance_(instance), options_(options), budget_(instance.budget) {
    build_items();
    build_order();
    build_segments();
    build_groups();
  }

  ReducedSolution solve() {
    best_cached_.assign(items_.size(), 0);
    incumbent_ = evaluate_cached(best_cached_);  // empty placement is always feasible
    root_fixing();
    dfs();
    return finish();
  }

 private:
  struct Relaxation {
    bool feasible = false;
    Money bound;        // floor of the LP optimum
    int critical = -1;  // segment split by the budget
    Money left;         // budget remaining when the critical segment was reached
  };

  void build_items() {
    const DemandMatrix& d = instance_.counts;
    const Catalog& cat = instance_.catalog;
    if (d.contents() != cat.size()) {
      throw StructuralError("solve_reduced: demand covers " + std::to_string(d.contents()) +
                            " contents, catalog has " + std::to_string(cat.size()));
    }
    S_ = d.contents();
    L_ = d.locations();
    for (int l = 0; l <= L_; ++l) {
      for (int s = 1; s <= S_; ++s) {
        const double raw = d.at(l, s);
        if (raw < 0) throw ValidationError("solve_reduced: negative count");
        Item it;
        it.row = l;
        it.content = s;
        it.index = l * S_ + (s - 1);
        it.count = Money::from_double(raw);
        if (it.count <= Money{}) continue;
        const Money nv = it.count * cat.value(s);
        it.cell_w = it.count * cat.cell_cost(s);
        it.cell_p = nv - it.cell_w;
        it.has_cell = it.cell_p > Money{} && it.cell_w > Money{};
        it.cache_w = cat.cache_cost(s);
        it.cache_p = nv - it.cache_w;
        it.has_cache = instance_.allow_caching && l > 0 && it.cache_p > Money{};
        if (it.has_cell || it.has_cache) items_.push_back(it);
      }
    }
    state_.resize(items_.size());
    lp_option_.assign(items_.size(), Option::none);
    chosen_mark_.assign(items_.size(), 0);
    for (std::size_t i = 0; i < items_.size(); ++i) {
      state_[i] = items_[i].has_cache ? State::free : State::zero;
    }
  }

  // Cellular knapsack order: margin ratio, then larger N, then lower index.
  void build_order() {
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (items_[i].has_cell) cell_order_.push_back(static_cast<int>(i));
    }
    std::sort(cell_order_.begin(), cell_order_.end(), [&](int a, int b) {
      const Item& x = items_[a];
      const Item& y = items_[b];
      if (!ratio_equal(x.cell_p, x.cell_w, y.cell_p, y.cell_w)) {
        return ratio_greater(x.cell_p, x.cell_w, y.cell_p, y.cell_w);
      }
      if (x.count != y.count) return x.count > y.count;
      return x.index < y.index;
    });
  }

  void build_segments() {
    struct Point {
      Money w, p;
      Option option;
    };
    for (std::size_t i = 0; i < items_.size(); ++i) {
      const Item& it = items_[i];
      const int id = static_cast<int>(i);
      if (it.has_cell) {
        segments_.push_back({id, Option::none, Option::cell, it.cell_w, it.cell_p, false});
      }
      if (!it.has_cache) continue;
      std::vector<Point> pts{{Money{}, Money{}, Option::none},
                             {it.cache_w, it.cache_p, Option::cache}};
      if (it.has_cell) pts.push_back({it.cell_w, it.cell_p, Option::cell});
      std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.w != b.w ? a.w < b.w : a.p > b.p;
      });
      std::vector<Point> hull;
      for (const Point& q : pts) {
        if (!hull.empty() && q.p <= hull.back().p) continue;  // dominated
        while (hull.size() >= 2) {
          const Point& a = hull[hull.size() - 2];
          const Point& b = hull.back();
          const int128 lhs = static_cast<int128>((b.p - a.p).raw()) * (q.w - b.w).raw();
          const int128 rhs = static_cast<int128>((q.p - b.p).raw()) * (b.w - a.w).raw();
          if (lhs > rhs) break;
          hull.pop_back();
        }
        hull.push_back(q);
      }
      for (std::size_t k = 1; k < hull.size(); ++k) {
        segments_.push_back({id, hull[k - 1].option, hull[k].option,
                             hull[k].w - hull[k - 1].w, hull[k].p - hull[k - 1].p, true});
      }
    }
    std::sort(segments_.begin(), segments_.end(), [&](const Segment& a, const Segment& b) {
      if (!ratio_equal(a.dp, a.dw, b.dp, b.dw)) return ratio_greater(a.dp, a.dw, b.dp, b.dw);
      const Item& x = items_[a.item];
      const Item& y = items_[b.item];
      if (x.count != y.count) return x.count > y.count;
      if (x.index != y.index) return x.index < y.index;
      return a.free_state && !b.free_state;
    });
  }

  bool active(const Segment& seg) const {
    const State st = state_[seg.item];
    return seg.free_state ? st == State::free : st == State::zero;
  }

  void set_state(int item, State st) {
    const Item& it = items_[item];
    if (state_[item] == State::one) {
      one_w_ -= it.cache_w;
      one_p_ -= it.cache_p;
    }
    state_[item] = st;
    if (st == State::one) {
      one_w_ += it.cache_w;
      one_p_ += it.cache_p;
    }
  }

  Relaxation relax() {
    for (int i : touched_) lp_option_[i] = Option::none;
    touched_.clear();
    Relaxation r;
    Money left = budget_ - one_w_;
    if (left < Money{}) return r;
    r.feasible = true;
    Money total = one_p_;
    for (std::size_t k = 0; k < segments_.size(); ++k) {
      const Segment& seg = segments_[k];
      if (!active(seg)) continue;
      if (seg.dw <= left) {
        left -= seg.dw;
        total += seg.dp;
        if (seg.free_state) {
          lp_option_[seg.item] = seg.to;
          touched_.push_back(seg.item);
        }
        continue;
      }
      r.critical = static_cast<int>(k);
      r.left = left;
      total += fractional_value(left, seg.dp, seg.dw);
      break;
    }
    r.bound = total;
    return r;
  }

  // Caches the LP-cached items (with `fill`, also any later cache step that
  // still fits), then solves the cellular knapsack exactly for that
  // placement.
  Money heuristic_value(const Relaxation& r, bool fill) {
    for (int i : chosen_) chosen_mark_[i] = 0;
    chosen_.clear();
    Money gamma = one_w_;
    Money value = one_p_;
    for (int i : touched_) {
      if (lp_option_[i] == Option::cache) {
        chosen_.push_back(i);
        chosen_mark_[i] = 1;
        gamma += items_[i].cache_w;
        value += items_[i].cache_p;
      }
    }
    if (fill && r.critical >= 0) {
      Money left = r.left;
      const std::size_t stop =
          std::min(segments_.size(), static_cast<std::size_t>(r.critical) + kFillScan);
      for (std::size_t k = static_cast<std::size_t>(r.critical); k < stop; ++k) {
        const Segment& seg = segments_[k];
        if (!active(seg)) continue;
        const Item& it = items_[seg.item];
        if (seg.to == Option::cell) {
          if (seg.dw <= left) {
            left -= seg.dw;
            if (seg.free_state) {
              chosen_mark_[seg.item] = 2;
              chosen_.push_back(seg.item);
            }
          }
          continue;
        }
        if (chosen_mark_[seg.item] == 1) continue;
        const Money back = lp_option_[seg.item] == Option::cell || chosen_mark_[seg.item] == 2
                               ? it.cell_w
                               : Money{};
        if (it.cache_w > left + back) continue;
        left = left + back - it.cache_w;
        if (chosen_mark_[seg.item] == 0) chosen_.push_back(seg.item);
        chosen_mark_[seg.item] = 1;
        gamma += it.cache_w;
        value += it.cache_p;
      }
    }
    Money left = budget_ - gamma;
    for (int i : cell_order_) {
      if (left <= Money{}) break;
      if (state_[i] == State::one || chosen_mark_[i] == 1) continue;
      const Item& it = items_[i];
      if (it.cell_w <= left) {
        left -= it.cell_w;
        value += it.cell_p;
      } else {
        value += fractional_value(left, it.cell_p, it.cell_w);
        break;
      }
    }
    return value;
  }

  Money evaluate_cached(const std::vector<std::uint8_t>& cached,
                        Grid<Money>* spend = nullptr) const {
    Money gamma;
    Money value;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (cached[i]) {
        gamma += items_[i].cache_w;
        value += items_[i].cache_p;
      }
    }
    Money left = budget_ - gamma;
    for (int i : cell_order_) {
      if (cached[i] || left <= Money{}) continue;
      const Item& it = items_[i];
      const Money used = std::min(it.cell_w, left);
      value += used == it.cell_w ? it.cell_p : fractional_value(left, it.cell_p, it.cell_w);
      left -= used;
      if (spend != nullptr) (*spend)(it.row, it.content - 1) = used;
    }
    return value;
  }

  void improve(const Relaxation& r) {
    record_incumbent(heuristic_value(r, false));
    record_incumbent(heuristic_value(r, true));
  }

  void record_incumbent(Money value) {
    if (value <= incumbent_) return;
    incumbent_ = value;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      best_cached_[i] = state_[i] == State::one || chosen_mark_[i] == 1 ? 1 : 0;
    }
  }

  void count_node() {
    if (++nodes_ > options_.node_limit) {
      throw Error("solve_reduced: node limit of " + std::to_string(options_.node_limit) +
                  " exceeded");
    }
  }

  // Lagrangian bound at the root multiplier: any free bit whose forced
  // value cannot beat the incumbent is fixed to the other value.
  void root_fixing() {
    for (int round = 0; round < 16; ++round) {
      count_node();
      const Relaxation r = relax();
      if (!r.feasible) return;
      improve(r);
      if (r.bound <= incumbent_) return;
      int128 lp = 0;
      int128 lw = 1;
      if (r.critical >= 0) {
        lp = segments_[r.critical].dp.raw();
        lw = segments_[r.critical].dw.raw();
      }
      auto reduced = [&](Money w, Money p) {
        return lw * static_cast<int128>(p.raw()) - lp * static_cast<int128>(w.raw());
      };
      std::vector<int128> best(items_.size(), 0);
      int128 lagrangian = lw * one_p_.raw() + lp * (budget_ - one_w_).raw();
      for (std::size_t i = 0; i < items_.size(); ++i) {
        const Item& it = items_[i];
        if (state_[i] == State::one) continue;
        int128 b = 0;
        if (it.has_cell) b = std::max(b, reduced(it.cell_w, it.cell_p));
        if (state_[i] == State::free) b = std::max(b, reduced(it.cache_w, it.cache_p));
        best[i] = b;
        lagrangian += b;
      }
      const int128 threshold = (static_cast<int128>(incumbent_.raw()) + 1) * lw;
      bool changed = false;
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (state_[i] != State::free) continue;
        const Item& it = items_[i];
        const int128 rest = lagrangian - best[i];
        const int128 with_cache = rest + reduced(it.cache_w, it.cache_p);
        const int128 without =
            rest + (it.has_cell ? std::max<int128>(0, reduced(it.cell_w, it.cell_p)) : 0);
        if (with_cache < threshold) {
          set_state(static_cast<int>(i), State::zero);
          changed = true;
        } else if (without < threshold) {
          set_state(static_cast<int>(i), State::one);
          changed = true;
        }
      }
      if (!changed) return;
    }
  }

  void dfs() {
    count_node();
    const Relaxation r = relax();
    if (!r.feasible || r.bound <= incumbent_) return;
    improve(r);
    if (r.bound <= incumbent_) return;

    int branch = -1;
    bool cache_first = true;
    if (r.critical >= 0) {
      const Segment& seg = segments_[r.critical];
      if (seg.free_state && (seg.from == Option::cache || seg.to == Option::cache)) {
        branch = seg.item;
        const bool majority = 2 * static_cast<int128>(r.left.raw()) >= seg.dw.raw();
        cache_first = seg.to == Option::cache ? majority : !majority;
      }
    }
    if (branch < 0) {
      // The relaxation is integral in the cache bits; only tie order or
      // rounding can separate it from the heuristic, so split any free bit.
      for (const Segment& seg : segments_) {
        if (seg.free_state && active(seg)) {
          branch = seg.item;
          break;
        }
      }
      if (branch < 0) return;
      cache_first = lp_option_[branch] == Option::cache;
    }
    const State first = cache_first ? State::one : State::zero;
    const State second = cache_first ? State::zero : State::one;
    std::vector<int> changed;
    for (State st : {first, second}) {
      assign(branch, st, changed);
      dfs();
      for (int i : changed) set_state(i, State::free);
      changed.clear();
    }
  }

  // Cells with the same content and count are interchangeable; only
  // placements caching an index prefix of each such group are explored.
  void build_groups() {
    std::map<std::pair<int, std::int64_t>, int> ids;
    group_of_.assign(items_.size(), -1);
    group_pos_.assign(items_.size(), 0);
    for (std::size_t i = 0; i < items_.size(); ++i) {
      const Item& it = items_[i];
      if (!it.has_cache) continue;
      const auto [pos, fresh] =
          ids.try_emplace({it.content, it.count.raw()}, static_cast<int>(groups_.size()));
      if (fresh) groups_.emplace_back();
      group_of_[i] = pos->second;
      group_pos_[i] = static_cast<int>(groups_[pos->second].size());
      groups_[pos->second].push_back(static_cast<int>(i));
    }
  }

  // Sets `item` and the group members the prefix order implies.
  void assign(int item, State st, std::vector<int>& changed) {
    const std::vector<int>& g = groups_[group_of_[item]];
    const std::size_t pos = static_cast<std::size_t>(group_pos_[item]);
    const std::size_t lo = st == State::one ? 0 : pos;
    const std::size_t hi = st == State::one ? pos + 1 : g.size();
    for (std::size_t k = lo; k < hi; ++k) {
      if (state_[g[k]] != State::free) continue;
      set_state(g[k], st);
      changed.push_back(g[k]);
    }
  }

  ReducedSolution finish() {
    ReducedSolution sol;
    sol.z = CacheBits(L_, S_, 0);
    sol.counts = Grid<Money>(L_ + 1, S_);
    sol.cell_spend = Grid<Money>(L_ + 1, S_);
    const DemandMatrix& d = instance_.counts;
    for (int l = 0; l <= L_; ++l) {
      for (int s = 1; s <= S_; ++s) sol.counts(l, s - 1) = Money::from_double(d.at(l, s));
    }
    sol.objective = evaluate_cached(best_cached_, &sol.cell_spend);
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (!best_cached_[i]) continue;
      sol.z(items_[i].row - 1, items_[i].content - 1) = 1;
      sol.gamma += items_[i].cache_w;
    }
    for (int l = 0; l <= L_; ++l) {
      for (int s = 1; s <= S_; ++s) {
        const Money spent = sol.cell_spend(l, s - 1);
        sol.beta += spent;
        if (spent > Money{} && spent.raw() % instance_.catalog.cell_cost(s).raw() != 0) {
          sol.integral = false;
        }
      }
    }
    sol.nodes = nodes_;
    return sol;
  }

  const ReducedInstance& instance_;
  SolverOptions options_;
  Money budget_;
  int L_ = 0;
  int S_ = 0;
  std::vector<Item> items_;
  std::vector<State> state_;
  std::vector<Option> lp_option_;
  std::vector<int> touched_;
  std::vector<int> chosen_;  // free items cached by the last heuristic
  std::vector<std::uint8_t> chosen_mark_;  // 1 cached, 2 cellular during the fill
  std::vector<int> cell_order_;
  std::vector<std::vector<int>> groups_;
  std::vector<int> group_of_;
  std::vector<int> group_pos_;
  std::vector<Segment> segments_;
  Money one_w_, one_p_;
  Money incumbent_;
  std::vector<std::uint8_t> best_cached_;
  std::int64_t nodes_ = 0;
};

}  // namespace

double ReducedSolution::x(int location, int content, const Catalog& catalog) const {
  const Money n = counts(location, content - 1);
  if (n <= Money{}) return 0.0;
  return cell_spend(location, content - 1).to_double() /
         (n * catalog.cell_cost(content)).to_double();
}

std::int64_t ReducedSolution::sponsored_requests(int location, int content,
                                                 const Catalog& catalog) const {
  return whole_units(cell_spend(location, content - 1), catalog.cell_cost(content));
}

ReducedSolution solve_reduced(const ReducedInstance& instance, const SolverOptions& options) {
  if (instance.budget < Money{}) {
    throw ValidationError("solve_reduced: budget must be non-negative");
  }
  Solver solver(instance, options);
  return solver.solve();
}

// ---------------------------------------------------------------------------
// Brute force over the per-request problem

JointSolution brute_force_joint(const Trace& trace, const Catalog& catalog, Money budget,
                                const BruteForceOptions& options) {
  if (budget < Money{}) throw ValidationError("brute_force_joint: negative budget");
  if (trace.contents() > catalog.size()) {
    throw StructuralError("brute_force_joint: trace references contents beyond the catalog");
  }
  const int L = trace.locations();
  const int S = catalog.size();
  const int bits = L * S;
  // Requests per (location, content) and per content.
  Grid<std::int64_t> n(L + 1, S, 0);
  for (const Request& r : trace.events()) {
    if (r.has_content()) ++n(r.location, r.content - 1);
  }
  std::vector<std::int64_t> per_content(static_cast<std::size_t>(S), 0);
  for (int l = 0; l <= L; ++l) {
    for (int s = 0; s < S; ++s) per_content[s] += n(l, s);
  }
  {
    long double size = std::ldexp(1.0L, bits);
    for (int s = 0; s < S; ++s) {
      if (catalog.value(s + 1) > catalog.cell_cost(s + 1)) size *= per_content[s] + 1;
    }
    if (bits > 62 || size > static_cast<long double>(options.max_assignments)) {
      throw SizeLimitError("brute_force_joint: " + std::to_string(bits) + " cache bits and " +
                           std::to_string(trace.request_count()) +
                           " requests exceed the cap of " +
                           std::to_string(options.max_assignments) + " assignments");
    }
  }

  Money best_total = Money::from_integer(-1);
  std::uint64_t best_mask = 0;
  std::vector<std::int64_t> best_k(static_cast<std::size_t>(S), 0);
  std::vector<std::int64_t> uncached(static_cast<std::size_t>(S));
  std::vector<std::int64_t> k(static_cast<std::size_t>(S), 0);

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    Money gamma;
    Money wifi_value;
    for (int s = 0; s < S; ++s) uncached[s] = per_content[s];
    for (int b = 0; b < bits; ++b) {
      if (((mask >> b) & 1U) == 0) continue;
      const int l = b / S + 1;
      const int s = b % S;
      gamma += catalog.cache_cost(s + 1);
      wifi_value += catalog.value(s + 1) * n(l, s);
      uncached[s] -= n(l, s);
    }
    if (gamma > budget) continue;
    const Money left = budget - gamma;
    // Cellular counts per content; which of a content's requests get them
    // does not matter.
    Money best_cell = Money::from_integer(-1);
    std::vector<std::int64_t> chosen(static_cast<std::size_t>(S), 0);
    std::function<void(int, Money, Money)> enumerate = [&](int s, Money spent, Money margin) {
      if (s == S) {
        if (margin > best_cell) {
          best_cell = margin;
          chosen = k;
        }
        return;
      }
      k[s] = 0;
      enumerate(s + 1, spent, margin);
      const Money c = catalog.cell_cost(s + 1);
      const Money m = catalog.value(s + 1) - c;
      if (m > Money{}) {
        for (std::int64_t j = 1; j <= uncached[s] && spent + c * j <= left; ++j) {
          k[s] = j;
          enumerate(s + 1, spent + c * j, margin + m * j);
        }
      }
      k[s] = 0;
    };
    enumerate(0, Money{}, Money{});
    const Money total = wifi_value - gamma + best_cell;
    if (total > best_total) {
      best_total = total;
      best_mask = mask;
      best_k = chosen;
    }
  }

  CacheBits z(L, S, 0);
  for (int b = 0; b < bits; ++b) {
    if ((best_mask >> b) & 1U) z(b / S, b % S) = 1;
  }
  JointSolution out;
  out.plan = CachePlan(std::move(z), catalog);
  out.total = best_total;
  out.objective = trace.horizon() > 0 ? best_total.to_double() / trace.horizon() : 0.0;
  out.spend = out.plan.gamma();
  std::vector<std::int64_t> quota = best_k;
  for (const Request& r : trace.events()) {
    Sponsorship sp{r, {}};
    if (r.has_content()) {
      if (out.plan.cached(r.location, r.content)) {
        sp.decision.wifi = true;
      } else if (quota[r.content - 1] > 0) {
        --quota[r.content - 1];
        sp.decision.cellular = true;
        out.spend += catalog.cell_cost(r.content);
      }
    }
    out.decisions.push_back(sp);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expansion

std::vector<Sponsorship> expand_solution(const ReducedSolution& solution,
                                         const Trace& trace, const Catalog& catalog,
                                         std::uint64_t seed) {
  if (trace.locations() != solution.locations() || trace.contents() != solution.contents()) {
    throw StructuralError("expand_solution: trace dimensions differ from the solution");
  }
  const int L = solution.locations();
  const int S = solution.contents();
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(L + 1) * S);
  const auto events = trace.events();
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Request& r = events[i];
    if (r.has_content()) {
      members[static_cast<std::size_t>(r.location) * S + (r.content - 1)].push_back(i);
    }
  }
  std::vector<Sponsorship> out(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) out[i].request = events[i];
  Rng rng(seed);
  for (int l = 0; l <= L; ++l) {
    for (int s = 1; s <= S; ++s) {
      auto& list = members[static_cast<std::size_t>(l) * S + (s - 1)];
      if (Money::from_integer(static_cast<std::int64_t>(list.size())) !=
          solution.counts(l, s - 1)) {
        throw StructuralError("expand_solution: trace has " + std::to_string(list.size()) +
                              " requests at (" + std::to_string(l) + "," +
                              std::to_string(s) + "), solution assumed " +
                              solution.counts(l, s - 1).to_string());
      }
      if (solution.cached(l, s)) {
        for (std::size_t i : list) out[i].decision.wifi = true;
        continue;
      }
      const auto take = static_cast<std::size_t>(
          std::min<std::int64_t>(solution.sponsored_requests(l, s, catalog),
                                 static_cast<std::int64_t>(list.size())));
      if (take == 0) continue;
      partial_shuffle(list, take, rng);
      for (std::size_t j = 0; j < take; ++j) out[list[j]].decision.cellular = true;
    }
  }
  return out;
}

void save_solution(const ReducedSolution& solution, const Catalog& catalog,
                   const std::filesystem::path& path) {
  auto out = csv::open_output(path);
  out << "# objective=" << solution.objective << ",gamma=" << solution.gamma
      << ",beta=" << solution.beta << '\n';
  out << "location,content,Z,X\n";
  for (int l = 0; l <= solution.locations(); ++l) {
    for (int s = 1; s <= solution.contents(); ++s) {
      const bool z = solution.cached(l, s);
      const double x = solution.x(l, s, catalog);
      if (!z && x == 0.0) continue;
      out << l << ',' << s << ',' << (z ? 1 : 0) << ',' << csv::format_fixed(x) << '\n';
    }
  }
}

}  // namespace edgesponsor
