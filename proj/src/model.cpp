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

#include "edgesponsor/model.hpp"

#include <algorithm>
#include <numeric>

#include "edgesponsor/csv.hpp"
#include "edgesponsor/errors.hpp"

namespace edgesponsor {
namespace {

std::string describe(const Request& r) {
  return "user " + std::to_string(r.user) + " slot " + std::to_string(r.slot);
}

}  // namespace

// ---------------------------------------------------------------------------
// Catalog

Catalog::Catalog(std::vector<Money> values, std::vector<Money> cell_costs,
                 Factor alpha)
    : values_(std::move(values)), cell_costs_(std::move(cell_costs)), alpha_(alpha) {
  if (values_.size() != cell_costs_.size()) {
    throw StructuralError("catalog: value and cost lists differ in length");
  }
  if (alpha_ <= Factor::from_integer(1)) {
    throw ValidationError("catalog: alpha must exceed 1, got " + alpha_.to_string());
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < Money{}) {
      throw ValidationError("catalog: negative value for content " + std::to_string(i + 1));
    }
    if (cell_costs_[i] <= Money{}) {
      throw ValidationError("catalog: cell cost must be positive for content " +
                            std::to_string(i + 1));
    }
  }
}

Money Catalog::max_cell_cost() const {
  Money best;
  for (Money c : cell_costs_) best = std::max(best, c);
  return best;
}

Money Catalog::mean_value() const {
  if (values_.empty()) return Money{};
  Money sum;
  for (Money v : values_) sum += v;
  return sum.divide_floor(static_cast<std::int64_t>(values_.size()));
}

Money Catalog::mean_cell_cost() const {
  if (cell_costs_.empty()) return Money{};
  Money sum;
  for (Money c : cell_costs_) sum += c;
  return sum.divide_floor(static_cast<std::int64_t>(cell_costs_.size()));
}

Catalog load_catalog(const std::filesystem::path& path, Factor alpha) {
  csv::Reader in(path);
  in.expect_header({"content", "value", "cell_cost"});
  std::vector<Money> values;
  std::vector<Money> costs;
  while (in.next()) {
    in.expect_columns(3);
    const long long id = in.to_int(0);
    if (id != static_cast<long long>(values.size()) + 1) {
      in.fail("content ids must be consecutive from 1");
    }
    values.push_back(in.to_decimal<6>(1));
    costs.push_back(in.to_decimal<6>(2));
  }
  try {
    return Catalog(std::move(values), std::move(costs), alpha);
  } catch (const Error& e) {
    in.fail(e.what());
  }
}

void save_catalog(const Catalog& catalog, const std::filesystem::path& path) {
  auto out = csv::open_output(path);
  out << "content,value,cell_cost\n";
  for (int s = 1; s <= catalog.size(); ++s) {
    out << s << ',' << catalog.value(s) << ',' << catalog.cell_cost(s) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Trace

Trace::Trace(int horizon, int users, int contents, int locations,
             std::vector<Request> events)
    : horizon_(horizon), users_(users), contents_(contents),
      locations_(locations), events_(std::move(events)) {
  if (horizon_ < 0 || users_ < 0 || contents_ < 0 || locations_ < 0) {
    throw ValidationError("trace: negative dimension");
  }
  slot_begin_.assign(static_cast<std::size_t>(horizon_) + 2, 0);
  const Request* prev = nullptr;
  for (const Request& r : events_) {
    if (r.slot < 1 || r.slot > horizon_) {
      throw ValidationError("trace: slot out of range for " + describe(r));
    }
    if (r.user < 1 || r.user > users_) {
      throw ValidationError("trace: user out of range for " + describe(r));
    }
    if (r.content < 0 || r.content > contents_) {
      throw ValidationError("trace: content out of range for " + describe(r));
    }
    if (r.location < 0 || r.location > locations_) {
      throw ValidationError("trace: location out of range for " + describe(r));
    }
    if (prev != nullptr) {
      if (prev->slot == r.slot && prev->user == r.user) {
        throw ValidationError("trace: duplicate request for " + describe(r));
      }
      if (std::pair(prev->slot, prev->user) > std::pair(r.slot, r.user)) {
        throw ValidationError("trace: events not sorted by (slot, user) at " + describe(r));
      }
    }
    ++slot_begin_[static_cast<std::size_t>(r.slot) + 1];
    prev = &r;
  }
  std::partial_sum(slot_begin_.begin(), slot_begin_.end(), slot_begin_.begin());
}

std::span<const Request> Trace::slot_events(int slot) const {
  if (slot < 1 || slot > horizon_) return {};
  const std::size_t b = slot_begin_[static_cast<std::size_t>(slot)];
  const std::size_t e = slot_begin_[static_cast<std::size_t>(slot) + 1];
  return std::span<const Request>(events_).subspan(b, e - b);
}

std::int64_t Trace::request_count() const {
  return std::count_if(events_.begin(), events_.end(),
                       [](const Request& r) { return r.has_content(); });
}

// ---------------------------------------------------------------------------
// Caching

Money caching_cost(const CacheBits& bits, const Catalog& catalog) {
  if (bits.cols() != catalog.size()) {
    throw StructuralError("caching_cost: placement has " + std::to_string(bits.cols()) +
                          " contents, catalog has " + std::to_string(catalog.size()));
  }
  Money total;
  for (int l = 0; l < bits.rows(); ++l) {
    for (int s = 0; s < bits.cols(); ++s) {
      if (bits(l, s) != 0) total += catalog.cache_cost(s + 1);
    }
  }
  return total;
}

CachePlan::CachePlan(CacheBits bits, const Catalog& catalog)
    : bits_(std::move(bits)), gamma_(caching_cost(bits_, catalog)) {}

CachePlan CachePlan::empty(int locations, int contents) {
  CachePlan plan;
  plan.bits_ = CacheBits(locations, contents, 0);
  return plan;
}

int CachePlan::cached_count() const {
  return static_cast<int>(std::count_if(bits_.data().begin(), bits_.data().end(),
                                        [](std::uint8_t b) { return b != 0; }));
}

void save_cache_plan(const CachePlan& plan, const std::filesystem::path& path) {
  auto out = csv::open_output(path);
  out << "# locations=" << plan.locations() << ",contents=" << plan.contents()
      << ",gamma=" << plan.gamma() << '\n';
  out << "location,content\n";
  for (int l = 1; l <= plan.locations(); ++l) {
    for (int s = 1; s <= plan.contents(); ++s) {
      if (plan.cached(l, s)) out << l << ',' << s << '\n';
    }
  }
}

CachePlan load_cache_plan(const std::filesystem::path& path, const Catalog& catalog) {
  csv::Reader in(path);
  in.expect_header({"location", "content"});
  const auto locations = in.meta("locations");
  if (!locations) in.fail("missing '# locations=' metadata");
  const int L = static_cast<int>(csv::parse_int(*locations));
  CacheBits bits(L, catalog.size(), 0);
  while (in.next()) {
    in.expect_columns(2);
    const long long l = in.to_int(0);
    const long long s = in.to_int(1);
    if (l < 1 || l > L) in.fail("location out of range");
    if (s < 1 || s > catalog.size()) in.fail("content out of range");
    bits(static_cast<int>(l) - 1, static_cast<int>(s) - 1) = 1;
  }
  CachePlan plan(std::move(bits), catalog);
  if (auto g = in.meta("gamma"); g && Money::parse(*g) != plan.gamma()) {
    in.fail("recorded gamma " + *g + " disagrees with catalog (" +
            plan.gamma().to_string() + ")");
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Payoff

void validate_decision(const Sponsorship& s, const CachePlan& plan) {
  const Request& r = s.request;
  if (s.decision.cellular && s.decision.wifi) {
    throw ConstraintViolation("both cellular and WiFi sponsoring for " + describe(r));
  }
  if (!r.has_content() && s.decision.sponsored()) {
    throw ConstraintViolation("sponsoring an empty request for " + describe(r));
  }
  if (s.decision.wifi && !plan.cached(r.location, r.content)) {
    throw ConstraintViolation("WiFi sponsoring without a cached copy for " + describe(r));
  }
}

SlotPayoff slot_payoff(std::span<const Sponsorship> decisions,
                       const Catalog& catalog, const CachePlan& plan) {
  SlotPayoff out;
  for (const Sponsorship& s : decisions) {
    validate_decision(s, plan);
    if (!s.request.has_content()) continue;
    if (s.decision.sponsored()) out.value += catalog.value(s.request.content);
    if (s.decision.cellular) out.cost += catalog.cell_cost(s.request.content);
  }
  return out;
}

Money net_payoff(const PolicyRun& run, const CachePlan& plan) {
  return run.total_value - run.total_cost - plan.gamma();
}

double total_payoff(const PolicyRun& run, const CachePlan& plan, int horizon) {
  if (horizon <= 0 || run.horizon != horizon ||
      static_cast<int>(run.slots.size()) != horizon) {
    throw StructuralError("total_payoff: run covers " + std::to_string(run.slots.size()) +
                          " slots, horizon is " + std::to_string(horizon));
  }
  return net_payoff(run, plan).to_double() / static_cast<double>(horizon);
}

bool check_budget(const PolicyRun& run, const CachePlan& plan, Money budget) {
  Money spend = plan.gamma();
  for (const SlotRecord& r : run.slots) spend += r.cost;
  return spend <= budget;
}

void save_run(const PolicyRun& run, const CachePlan& plan,
              const std::filesystem::path& path) {
  auto out = csv::open_output(path);
  out << "# horizon=" << run.horizon << ",gamma=" << plan.gamma()
      << ",sponsor_budget=" << run.sponsor_budget
      << ",slot_budget=" << run.slot_budget << ",requests=" << run.requests
      << ",sponsored=" << run.sponsored << '\n';
  out << "slot,value,cost,q\n";
  for (const SlotRecord& r : run.slots) {
    out << r.slot << ',' << r.value << ',' << r.cost << ',' << r.queue << '\n';
  }
}

PersistedRun load_run(const std::filesystem::path& path) {
  csv::Reader in(path);
  in.expect_header({"slot", "value", "cost", "q"});
  PersistedRun p;
  auto need = [&](const char* key) {
    auto v = in.meta(key);
    if (!v) in.fail(std::string("missing metadata '") + key + "'");
    return *v;
  };
  p.run.horizon = static_cast<int>(csv::parse_int(need("horizon")));
  p.gamma = Money::parse(need("gamma"));
  p.run.sponsor_budget = Money::parse(need("sponsor_budget"));
  p.run.slot_budget = Money::parse(need("slot_budget"));
  p.run.requests = csv::parse_int(need("requests"));
  p.run.sponsored = csv::parse_int(need("sponsored"));
  while (in.next()) {
    in.expect_columns(4);
    SlotRecord r;
    r.slot = static_cast<int>(in.to_int(0));
    if (r.slot != static_cast<int>(p.run.slots.size()) + 1) in.fail("slots must be consecutive");
    r.value = in.to_decimal<6>(1);
    r.cost = in.to_decimal<6>(2);
    r.queue = in.to_decimal<6>(3);
    p.run.total_value += r.value;
    p.run.total_cost += r.cost;
    p.run.slots.push_back(r);
  }
  return p;
}

}  // namespace edgesponsor
