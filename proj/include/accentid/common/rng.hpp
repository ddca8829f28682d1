// Copyright 2026 The accentid authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ACCENTID_COMMON_RNG_HPP_
#define ACCENTID_COMMON_RNG_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

namespace accentid {

// splitmix64 mixing step; also used to fold strings into seeds.
uint64_t mix64(uint64_t x);

// Derives a child seed from (seed, tag) so that per-utterance work can run
// in any order without changing results.
uint64_t derive_seed(uint64_t seed, std::string_view tag);
uint64_t derive_seed(uint64_t seed, std::string_view tag, uint64_t index);

// Deterministic PRNG (xoshiro256** seeded via splitmix64). Every random
// decision in the pipeline goes through this class, never through
// std::random_device or unseeded std:: distributions, so that identical
// seeds give identical artifacts.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();
  // Uniform in [0, n).
  uint64_t next_below(uint64_t n);
  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive bounds
  // Standard normal via Box-Muller (two uniform draws per call).
  double normal();
  double normal(double mean, double stddev);

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[next_below(items.size())];
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = next_below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  uint64_t s_[4];
};

}  // namespace accentid

#endif  // ACCENTID_COMMON_RNG_HPP_
