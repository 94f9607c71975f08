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

// Synthetic workloads: i.i.d. per-user request/mobility profiles, day-to-day
// Markov demand sequences, demand aggregation and the trace/demand/profile
// file formats.

#ifndef EDGESPONSOR_WORKLOAD_HPP_
#define EDGESPONSOR_WORKLOAD_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "edgesponsor/model.hpp"

namespace edgesponsor {

// Per-user request and location distributions of the i.i.d. scenario.
// Row u-1 of request_prob holds P(content = s) for s = 0..S (0 = idle);
// row u-1 of location_prob holds P(location = l) for l = 0..L.
class IidProfile {
 public:
  IidProfile(Grid<double> request_prob, Grid<double> location_prob);

  int users() const { return request_prob_.rows(); }
  int contents() const { return request_prob_.cols() - 1; }
  int locations() const { return location_prob_.cols() - 1; }
  double request_prob(int user, int content) const {
    return request_prob_(user - 1, content);
  }
  double location_prob(int user, int location) const {
    return location_prob_(user - 1, location);
  }
  const Grid<double>& request_grid() const { return request_prob_; }
  const Grid<double>& location_grid() const { return location_prob_; }

  friend bool operator==(const IidProfile&, const IidProfile&) = default;

 private:
  Grid<double> request_prob_;
  Grid<double> location_prob_;
};

// Normalized Zipf weights 1/k^exponent for k = 1..n.
std::vector<double> zipf_weights(int n, double exponent);

struct ZipfProfileSpec {
  int users = 200;
  int contents = 500;
  int locations = 50;
  double request_rate = 0.5;   // P(user requests something in a slot)
  double wifi_coverage = 0.6;  // P(user is inside some WiFi area)
  double zipf_exponent = 0.8;
  int home_locations = 3;      // WiFi areas a user moves between
};

// Every user shares the Zipf popularity (content 1 most popular) and splits
// its WiFi presence evenly over `home_locations` distinct random areas.
IidProfile make_zipf_profile(const ZipfProfileSpec& params, std::uint64_t seed);

struct CatalogSpec {
  int contents = 500;
  double value_scale = 1.0;
  double cost_scale = 1.0;
  Factor alpha = Factor::from_integer(3);
};

// Values fall linearly with popularity rank from 2.0 to 0.4 (times
// value_scale, +/-10% jitter); cellular costs are uniform on [0.5, 1.5]
// times cost_scale. Both are rounded to 0.001.
Catalog make_catalog(const CatalogSpec& params, std::uint64_t seed);

enum class KernelFamily { identity, poisson_drift, truncated_gaussian };

// Day-to-day transition law P(M | N) of one (location, content) count,
// supported on 0..support_cap.
//   identity:            M = N
//   poisson_drift:       M ~ Poisson(rho*N + lambda) conditioned on M <= cap
//   truncated_gaussian:  P(M) proportional to exp(-(M - rho*N - lambda)^2 / 2 sigma^2)
class MarkovKernel {
 public:
  MarkovKernel(KernelFamily family, double rho, double lambda, double sigma,
               int support_cap);
  static MarkovKernel identity(int support_cap);
  static MarkovKernel poisson_drift(double rho, double lambda, int support_cap);
  static MarkovKernel truncated_gaussian(double rho, double lambda, double sigma,
                                         int support_cap);

  KernelFamily family() const { return family_; }
  int support_cap() const { return support_cap_; }
  // Throws ValidationError when previous lies outside 0..support_cap.
  std::vector<double> pmf(int previous) const;
  double mean(int previous) const;

 private:
  KernelFamily family_;
  double rho_;
  double lambda_;
  double sigma_;
  int support_cap_;
};

// Request counts N[l, s]. Row 0 holds requests made outside WiFi coverage;
// they can only be sponsored over cellular and are not part of the
// cacheable matrix (total() ignores them).
class DemandMatrix {
 public:
  DemandMatrix() = default;
  DemandMatrix(int locations, int contents);

  int locations() const { return counts_.rows() - 1; }
  int contents() const { return counts_.cols(); }
  double& at(int location, int content) { return counts_(location, content - 1); }
  double at(int location, int content) const { return counts_(location, content - 1); }

  double total() const;            // locations 1..L
  double uncovered_total() const;  // location 0
  bool is_integral() const;
  const Grid<double>& grid() const { return counts_; }

  friend bool operator==(const DemandMatrix&, const DemandMatrix&) = default;

 private:
  Grid<double> counts_;
};

// Draws content ~ mu_u and location ~ eta_u independently for every
// (user, slot). Idle cells are kept as content-0 events.
Trace generate_iid_trace(const IidProfile& profile, int horizon, std::uint64_t seed);

// Day 1 realizes `base`; each later day draws every cell count from
// P(. | previous day count). A day's counts are realized by placing them on
// distinct random (user, slot) cells; unused cells produce no event.
std::vector<Trace> generate_day_sequence(const DemandMatrix& base,
                                         const MarkovKernel& kernel, int days,
                                         int users, int horizon, std::uint64_t seed);

// Indicator-sum of requests per (location, content); idle events dropped,
// location-0 requests land in row 0.
DemandMatrix aggregate_counts(const Trace& trace);

// CSV `slot,user,content,location` sorted by (slot, user), preceded by a
// `# horizon=T,users=U,contents=S,locations=L` line. Without the metadata
// line the bounds are inferred from the largest ids present.
void save_trace(const Trace& trace, const std::filesystem::path& path);
Trace load_trace(const std::filesystem::path& path);

// CSV `location,content,count` (non-zero cells) with a
// `# locations=L,contents=S` line. Location 0 is the uncovered row.
void save_demand(const DemandMatrix& demand, const std::filesystem::path& path);
DemandMatrix load_demand(const std::filesystem::path& path);

// CSV `user,kind,id,prob` with kind in {content, location}.
void save_profile(const IidProfile& profile, const std::filesystem::path& path);
IidProfile load_profile(const std::filesystem::path& path);

}  // namespace edgesponsor

#endif  // EDGESPONSOR_WORKLOAD_HPP_
