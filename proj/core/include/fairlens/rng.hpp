// Copyright 2026 The Fairlens Authors
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

#ifndef FAIRLENS_RNG_HPP_
#define FAIRLENS_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace fairlens {

/// Deterministic random stream. Wraps std::mt19937_64 (whose output sequence
/// is fixed by the standard) and supplies its own bounded-int, real and
/// gaussian transforms so results do not depend on the standard library's
/// unspecified distribution algorithms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n). n must be > 0. Rejection sampling, unbiased.
  uint64_t uniform_int(uint64_t n);

  /// Uniform integer in [lo, hi] inclusive.
  int64_t uniform_range(int64_t lo, int64_t hi);

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform_real();

  /// Standard normal via Box-Muller (one draw per call, no caching).
  double gauss();

  bool bernoulli(double p) { return uniform_real() < p; }

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// 64-bit FNV-1a over a byte string.
uint64_t fnv1a64(std::string_view bytes);

/// Derives the sub-stream seed for a pipeline phase from the master seed.
/// Scheme (documented so other implementations can mirror the structure):
///   h = fnv1a64(phase); mix(master ^ h ^ (index * 0x9e3779b97f4a7c15))
/// where mix is the splitmix64 finalizer applied twice.
uint64_t derive_seed(uint64_t master, std::string_view phase, uint64_t index = 0);

/// splitmix64 finalizer, used by derive_seed and the schema fingerprint.
uint64_t splitmix64(uint64_t x);

}  // namespace fairlens

#endif  // FAIRLENS_RNG_HPP_
