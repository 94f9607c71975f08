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

#include "edgesponsor/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

#include "edgesponsor/csv.hpp"
#include "edgesponsor/errors.hpp"
#include "edgesponsor/random.hpp"

namespace edgesponsor {
namespace {

constexpr double kProbTolerance = 1e-9;

void check_rows(const Grid<double>& g, const char* what) {
  for (int r = 0; r < g.rows(); ++r) {
    double sum = 0.0;
    for (int c = 0; c < g.cols(); ++c) {
      const double p = g(r, c);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(std::string("profile: ") + what +
                              " probability outside [0,1] for user " + std::to_string(r + 1));
      }
      sum += p;
    }
    if (std::fabs(sum - 1.0) > kProbTolerance) {
      throw ValidationError(std::string("profile: ") + what +
                            " probabilities of user " + std::to_string(r + 1) +
                            " sum to " + std::to_string(sum));
    }
  }
}

std::string format_count(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double round_to(double v, double step) { return std::round(v / step) * step; }

}  // namespace

IidProfile::IidProfile(Grid<double> request_prob, Grid<double> location_prob)
    : request_prob_(std::move(request_prob)), location_prob_(std::move(location_prob)) {
  if (request_prob_.rows() != location_prob_.rows()) {
    throw StructuralError("profile: request and location tables cover different users");
  }
  if (request_prob_.cols() < 1 || location_prob_.cols() < 1) {
    throw StructuralError("profile: missing the idle/uncovered column");
  }
  check_rows(request_prob_, "request");
  check_rows(location_prob_, "location");
}

std::vector<double> zipf_weights(int n, double exponent) {
  std::vector<double> w(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    w[k - 1] = 1.0 / std::pow(static_cast<double>(k), exponent);
    sum += w[k - 1];
  }
  for (double& x : w) x /= sum;
  return w;
}

IidProfile make_zipf_profile(const ZipfProfileSpec& params, std::uint64_t seed) {
  if (params.users < 1 || params.contents < 1 || params.locations < 0) {
    throw ValidationError("zipf profile: bad dimensions");
  }
  if (params.request_rate < 0 || params.request_rate > 1 || params.wifi_coverage < 0 ||
      params.wifi_coverage > 1) {
    throw ValidationError("zipf profile: rates must lie in [0,1]");
  }
  const int homes = params.locations == 0 ? 0 : std::clamp(params.home_locations, 1, params.locations);
  const std::vector<double> pop = zipf_weights(params.contents, params.zipf_exponent);
  Grid<double> req(params.users, params.contents + 1);
  Grid<double> loc(params.users, params.locations + 1);
  Rng rng(seed);
  std::vector<int> ids(static_cast<std::size_t>(params.locations));
  for (int u = 0; u < params.users; ++u) {
    req(u, 0) = 1.0 - params.request_rate;
    for (int s = 1; s <= params.contents; ++s) req(u, s) = params.request_rate * pop[s - 1];
    if (homes == 0) {
      loc(u, 0) = 1.0;
      continue;
    }
    std::iota(ids.begin(), ids.end(), 1);
    partial_shuffle(ids, static_cast<std::size_t>(homes), rng);
    loc(u, 0) = 1.0 - params.wifi_coverage;
    for (int h = 0; h < homes; ++h) loc(u, ids[h]) = params.wifi_coverage / homes;
  }
  return IidProfile(std::move(req), std::move(loc));
}

Catalog make_catalog(const CatalogSpec& params, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Money> values;
  std::vector<Money> costs;
  for (int s = 1; s <= params.contents; ++s) {
    const double rank = params.contents == 1 ? 0.0
                                           : static_cast<double>(s - 1) / (params.contents - 1);
    const double v = params.value_scale * (2.0 - 1.6 * rank) * (0.9 + 0.2 * rng.uniform());
    const double c = params.cost_scale * (0.5 + rng.uniform());
    values.push_back(Money::from_double(round_to(v, 0.001)));
    costs.push_back(Money::from_double(std::max(round_to(c, 0.001), 0.001)));
  }
  return Catalog(std::move(values), std::move(costs), params.alpha);
}

// ---------------------------------------------------------------------------
// Markov kernel

MarkovKernel::MarkovKernel(KernelFamily family, double rho, double lambda,
                           double sigma, int support_cap)
    : family_(family), rho_(rho), lambda_(lambda), sigma_(sigma), support_cap_(support_cap) {
  if (support_cap_ < 0) throw ValidationError("kernel: negative support cap");
  if (rho_ < 0 || lambda_ < 0) throw ValidationError("kernel: rho and lambda must be >= 0");
  if (family_ == KernelFamily::truncated_gaussian && !(sigma_ > 0)) {
    throw ValidationError("kernel: gaussian sigma must be positive");
  }
}

MarkovKernel MarkovKernel::identity(int support_cap) {
  return MarkovKernel(KernelFamily::identity, 1.0, 0.0, 0.0, support_cap);
}
MarkovKernel MarkovKernel::poisson_drift(double rho, double lambda, int support_cap) {
  return MarkovKernel(KernelFamily::poisson_drift, rho, lambda, 0.0, support_cap);
}
MarkovKernel MarkovKernel::truncated_gaussian(double rho, double lambda, double sigma,
                                              int support_cap) {
  return MarkovKernel(KernelFamily::truncated_gaussian, rho, lambda, sigma, support_cap);
}

std::vector<double> MarkovKernel::pmf(int previous) const {
  if (previous < 0 || previous > support_cap_) {
    throw ValidationError("kernel: count " + std::to_string(previous) +
                          " outside support 0.." + std::to_string(support_cap_));
  }
  std::vector<double> p(static_cast<std::size_t>(support_cap_) + 1, 0.0);
  const double mean = rho_ * previous + lambda_;
  switch (family_) {
    case KernelFamily::identity:
      p[previous] = 1.0;
      return p;
    case KernelFamily::poisson_drift:
      if (mean == 0.0) {
        p[0] = 1.0;
        return p;
      }
      for (int m = 0; m <= support_cap_; ++m) {
        p[m] = std::exp(m * std::log(mean) - mean - std::lgamma(m + 1.0));
      }
      break;
    case KernelFamily::truncated_gaussian:
      for (int m = 0; m <= support_cap_; ++m) {
        const double z = (m - mean) / sigma_;
        p[m] = std::exp(-0.5 * z * z);
      }
      break;
  }
  double sum = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(sum > 0.0)) {
    // All mass fell beyond the cap.
    std::fill(p.begin(), p.end(), 0.0);
    p[std::clamp(static_cast<int>(std::lround(mean)), 0, support_cap_)] = 1.0;
    return p;
  }
  for (double& x : p) x /= sum;
  return p;
}

double MarkovKernel::mean(int previous) const {
  const std::vector<double> p = pmf(previous);
  double m = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) m += static_cast<double>(k) * p[k];
  return m;
}

// ---------------------------------------------------------------------------
// Demand

DemandMatrix::DemandMatrix(int locations, int contents)
    : counts_(locations + 1, contents, 0.0) {
  if (locations < 0 || contents < 0) throw ValidationError("demand: negative dimension");
}

double DemandMatrix::total() const {
  double sum = 0.0;
  for (int l = 1; l < counts_.rows(); ++l) {
    for (int s = 0; s < counts_.cols(); ++s) sum += counts_(l, s);
  }
  return sum;
}

double DemandMatrix::uncovered_total() const {
  double sum = 0.0;
  for (int s = 0; s < counts_.cols(); ++s) sum += counts_(0, s);
  return sum;
}

bool DemandMatrix::is_integral() const {
  return std::all_of(counts_.data().begin(), counts_.data().end(),
                     [](double v) { return v == std::floor(v); });
}

DemandMatrix aggregate_counts(const Trace& trace) {
  DemandMatrix d(trace.locations(), trace.contents());
  for (const Request& r : trace.events()) {
    if (r.has_content()) d.at(r.location, r.content) += 1.0;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Generators

Trace generate_iid_trace(const IidProfile& profile, int horizon, std::uint64_t seed) {
  if (horizon < 0) throw ValidationError("generate_iid_trace: negative horizon");
  const int U = profile.users();
  std::vector<Categorical> content_dist;
  std::vector<Categorical> location_dist;
  for (int u = 0; u < U; ++u) {
    const auto& rq = profile.request_grid().data();
    const auto& lc = profile.location_grid().data();
    const auto S1 = static_cast<std::size_t>(profile.contents() + 1);
    const auto L1 = static_cast<std::size_t>(profile.locations() + 1);
    content_dist.emplace_back(rq.subspan(static_cast<std::size_t>(u) * S1, S1));
    location_dist.emplace_back(lc.subspan(static_cast<std::size_t>(u) * L1, L1));
  }
  Rng rng(seed);
  std::vector<Request> events;
  events.reserve(static_cast<std::size_t>(horizon) * static_cast<std::size_t>(U));
  for (int t = 1; t <= horizon; ++t) {
    for (int u = 1; u <= U; ++u) {
      const int s = content_dist[u - 1].sample(rng);
      const int l = location_dist[u - 1].sample(rng);
      events.push_back(Request{t, u, s, l});
    }
  }
  return Trace(horizon, U, profile.contents(), profile.locations(), std::move(events));
}

std::vector<Trace> generate_day_sequence(const DemandMatrix& base,
                                         const MarkovKernel& kernel, int days,
                                         int users, int horizon, std::uint64_t seed) {
  if (days < 1) throw ValidationError("generate_day_sequence: need at least one day");
  if (users < 0 || horizon < 0) throw ValidationError("generate_day_sequence: bad grid");
  if (!base.is_integral()) {
    throw ValidationError("generate_day_sequence: base demand must be integral");
  }
  const int L = base.locations();
  const int S = base.contents();
  const std::size_t cells = static_cast<std::size_t>(users) * static_cast<std::size_t>(horizon);
  Rng rng(seed);
  std::map<int, Categorical> transition;  // keyed by previous count
  std::vector<Trace> out;
  DemandMatrix current = base;
  std::vector<std::uint32_t> slots(cells);
  for (int day = 1; day <= days; ++day) {
    if (day > 1) {
      DemandMatrix next(L, S);
      for (int l = 0; l <= L; ++l) {
        for (int s = 1; s <= S; ++s) {
          const int prev = static_cast<int>(current.at(l, s));
          auto it = transition.find(prev);
          if (it == transition.end()) {
            it = transition.emplace(prev, Categorical(kernel.pmf(prev))).first;
          }
          next.at(l, s) = it->second.sample(rng);
        }
      }
      current = std::move(next);
    }
    const double demanded = current.total() + current.uncovered_total();
    if (demanded > static_cast<double>(cells)) {
      throw CapacityError("day " + std::to_string(day) + " demands " +
                          std::to_string(static_cast<long long>(demanded)) +
                          " requests but only " + std::to_string(cells) +
                          " (user, slot) cells exist");
    }
    const auto k = static_cast<std::size_t>(demanded);
    std::iota(slots.begin(), slots.end(), 0U);
    partial_shuffle(slots, k, rng);
    std::vector<Request> events;
    events.reserve(k);
    std::size_t next_cell = 0;
    for (int l = 0; l <= L; ++l) {
      for (int s = 1; s <= S; ++s) {
        const auto n = static_cast<std::size_t>(current.at(l, s));
        for (std::size_t i = 0; i < n; ++i) {
          const std::uint32_t c = slots[next_cell++];
          events.push_back(Request{static_cast<int>(c / users) + 1,
                                   static_cast<int>(c % users) + 1, s, l});
        }
      }
    }
    std::sort(events.begin(), events.end(), [](const Request& a, const Request& b) {
      return std::pair(a.slot, a.user) < std::pair(b.slot, b.user);
    });
    out.emplace_back(horizon, users, S, L, std::move(events));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files

void save_trace(const Trace& trace, const std::filesystem::path& path) {
  auto out = csv::open_output(path);
  out << "# horizon=" << trace.horizon() << ",users=" << trace.users()
      << ",contents=" << trace.contents() << ",locations=" << trace.locations() << '\n';
  out << "slot,user,content,location\n";
  for (const Request& r : trace.events()) {
    out << r.slot << ',' << r.user << ',' << r.content << ',' << r.location << '\n';
  }
}

Trace load_trace(const std::filesystem::path& path) {
  csv::Reader in(path);
  in.expect_header({"slot", "user", "content", "location"});
  auto bound = [&](const char* key) -> long long {
    auto v = in.meta(key);
    if (!v) return -1;
    try {
      return csv::parse_int(*v);
    } catch (const std::exception& e) {
      in.fail(e.what());
    }
  };
  const long long T = bound("horizon");
  const long long U = bound("users");
  const long long S = bound("contents");
  const long long L = bound("locations");
  std::vector<Request> events;
  long long max_t = 0, max_u = 0, max_s = 0, max_l = 0;
  while (in.next()) {
    in.expect_columns(4);
    Request r{static_cast<int>(in.to_int(0)), static_cast<int>(in.to_int(1)),
              static_cast<int>(in.to_int(2)), static_cast<int>(in.to_int(3))};
    if (r.slot < 1 || (T >= 0 && r.slot > T)) in.fail("slot out of range");
    if (r.user < 1 || (U >= 0 && r.user > U)) in.fail("user out of range");
    if (r.content < 0 || (S >= 0 && r.content > S)) in.fail("content out of range");
    if (r.location < 0 || (L >= 0 && r.location > L)) in.fail("location out of range");
    if (!events.empty()) {
      const Request& p = events.back();
      if (p.slot == r.slot && p.user == r.user) in.fail("duplicate (user, slot) request");
      if (std::pair(p.slot, p.user) > std::pair(r.slot, r.user)) {
        in.fail("rows not sorted by (slot, user)");
      }
    }
    max_t = std::max<long long>(max_t, r.slot);
    max_u = std::max<long long>(max_u, r.user);
    max_s = std::max<long long>(max_s, r.content);
    max_l = std::max<long long>(max_l, r.location);
    events.push_back(r);
  }
  return Trace(static_cast<int>(T >= 0 ? T : max_t), static_cast<int>(U >= 0 ? U : max_u),
               static_cast<int>(S >= 0 ? S : max_s), static_cast<int>(L >= 0 ? L : max_l),
               std::move(events));
}

void save_demand(const DemandMatrix& demand, const std::filesystem::path& path) {
  auto out = csv::open_output(path);
  out << "# locations=" << demand.locations() << ",contents=" << demand.contents() << '\n';
  out << "location,content,count\n";
  for (int l = 0; l <= demand.locations(); ++l) {
    for (int s = 1; s <= demand.contents(); ++s) {
      const double v = demand.at(l, s);
      if (v != 0.0) out << l << ',' << s << ',' << format_count(v) << '\n';
    }
  }
}

DemandMatrix load_demand(const std::filesystem::path& path) {
  csv::Reader in(path);
  in.expect_header({"location", "content", "count"});
  const auto L = in.meta("locations");
  const auto S = in.meta("contents");
  if (!L || !S) in.fail("missing '# locations=..,contents=..' metadata");
  DemandMatrix d(static_cast<int>(csv::parse_int(*L)), static_cast<int>(csv::parse_int(*S)));
  while (in.next()) {
    in.expect_columns(3);
    const long long l = in.to_int(0);
    const long long s = in.to_int(1);
    const double v = in.to_double(2);
    if (l < 0 || l > d.locations()) in.fail("location out of range");
    if (s < 1 || s > d.contents()) in.fail("content out of range");
    if (!(v >= 0.0)) in.fail("negative count");
    d.at(static_cast<int>(l), static_cast<int>(s)) = v;
  }
  return d;
}

void save_profile(const IidProfile& profile, const std::filesystem::path& path) {
  auto out = csv::open_output(path);
  out << "# users=" << profile.users() << ",contents=" << profile.contents()
      << ",locations=" << profile.locations() << '\n';
  out << "user,kind,id,prob\n";
  for (int u = 1; u <= profile.users(); ++u) {
    for (int s = 0; s <= profile.contents(); ++s) {
      const double p = profile.request_prob(u, s);
      if (p != 0.0) out << u << ",content," << s << ',' << format_count(p) << '\n';
    }
    for (int l = 0; l <= profile.locations(); ++l) {
      const double p = profile.location_prob(u, l);
      if (p != 0.0) out << u << ",location," << l << ',' << format_count(p) << '\n';
    }
  }
}

IidProfile load_profile(const std::filesystem::path& path) {
  csv::Reader in(path);
  in.expect_header({"user", "kind", "id", "prob"});
  const auto U = in.meta("users");
  const auto S = in.meta("contents");
  const auto L = in.meta("locations");
  if (!U || !S || !L) in.fail("missing '# users=..,contents=..,locations=..' metadata");
  const int users = static_cast<int>(csv::parse_int(*U));
  const int contents = static_cast<int>(csv::parse_int(*S));
  const int locations = static_cast<int>(csv::parse_int(*L));
  Grid<double> req(users, contents + 1);
  Grid<double> loc(users, locations + 1);
  while (in.next()) {
    in.expect_columns(4);
    const long long u = in.to_int(0);
    const std::string& kind = in.row()[1];
    const long long id = in.to_int(2);
    const double p = in.to_double(3);
    if (u < 1 || u > users) in.fail("user out of range");
    if (kind == "content") {
      if (id < 0 || id > contents) in.fail("content out of range");
      req(static_cast<int>(u) - 1, static_cast<int>(id)) = p;
    } else if (kind == "location") {
      if (id < 0 || id > locations) in.fail("location out of range");
      loc(static_cast<int>(u) - 1, static_cast<int>(id)) = p;
    } else {
      in.fail("kind must be 'content' or 'location'");
    }
  }
  return IidProfile(std::move(req), std::move(loc));
}

}  // namespace edgesponsor
