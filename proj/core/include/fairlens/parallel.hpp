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

#ifndef FAIRLENS_PARALLEL_HPP_
#define FAIRLENS_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace fairlens {

/// Worker cap used by parallel_for. 0 means hardware concurrency. The
/// FAIRLENS_THREADS environment variable overrides the built-in default;
/// set_thread_cap (driven by the CLI --threads flag) overrides both.
void set_thread_cap(int threads);
int thread_cap();

/// Runs fn(i) for i in [0, n). Work items must be independent and write only
/// to their own slots; results are then identical for every worker count.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace fairlens

#endif  // FAIRLENS_PARALLEL_HPP_
