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

#include "fairlens/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fairlens {

namespace {

int g_thread_cap = 0;  // 0 = auto

int env_threads() {
  const char* v = std::getenv("FAIRLENS_THREADS");
  if (v == nullptr) return 0;
  int n = std::atoi(v);
  return n > 0 ? n : 0;
}

}  // namespace

void set_thread_cap(int threads) { g_thread_cap = threads > 0 ? threads : 0; }

int thread_cap() {
  if (g_thread_cap > 0) return g_thread_cap;
  int env = env_threads();
  if (env > 0) return env;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  int workers = thread_cap();
  if (workers <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  size_t count = std::min<size_t>(static_cast<size_t>(workers), n);
  pool.reserve(count);
  for (size_t w = 0; w < count; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace fairlens
