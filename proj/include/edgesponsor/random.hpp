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

// Portable random streams. std::mt19937_64 output is fixed by the standard;
// the standard distributions are not, so the few draws needed here are
// implemented directly on top of the raw engine.

#ifndef EDGESPONSOR_RANDOM_HPP_
#define EDGESPONSOR_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace edgesponsor {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);
  // Standard normal (Box-Muller, one value per call).
  double normal();

  // Independent child seed for sub-stream `stream` of `seed`.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

// Inverse-CDF sampler over indices 0..n-1.
class Categorical {
 public:
  Categorical() = default;
  explicit Categorical(std::span<const double> weights);

  int sample(Rng& rng) const;
  int size() const { return static_cast<int>(cumulative_.size()); }

 private:
  std::vector<double> cumulative_;
};

// Shuffles the first `count` positions of `items` into a uniform sample
// without replacement (partial Fisher-Yates).
template <class T>
void partial_shuffle(std::vector<T>& items, std::size_t count, Rng& rng) {
  for (std::size_t i = 0; i < count && i + 1 < items.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(items.size() - i));
    std::swap(items[i], items[j]);
  }
}

}  // namespace edgesponsor

#endif  // EDGESPONSOR_RANDOM_HPP_
