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

#include "fairlens/rng.hpp"

#include <cmath>

#include "fairlens/error.hpp"

namespace fairlens {

uint64_t Rng::uniform_int(uint64_t n) {
  if (n == 0) throw ConfigError("Rng::uniform_int: n must be > 0");
  // Rejection below the largest multiple of n.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

int64_t Rng::uniform_range(int64_t lo, int64_t hi) {
  if (lo > hi) throw ConfigError("Rng::uniform_range: empty range");
  return lo + static_cast<int64_t>(
                  uniform_int(static_cast<uint64_t>(hi - lo) + 1));
}

double Rng::uniform_real() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gauss() {
  // Box-Muller; u1 shifted away from zero so log() is finite.
  double u1 = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t master, std::string_view phase, uint64_t index) {
  uint64_t h = fnv1a64(phase);
  uint64_t mixed = master ^ h ^ (index * 0x9e3779b97f4a7c15ULL);
  return splitmix64(splitmix64(mixed));
}

}  // namespace fairlens
