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

#ifndef FAIRLENS_GENERATION_HPP_
#define FAIRLENS_GENERATION_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fairlens/dataset.hpp"
#include "fairlens/discrimination.hpp"
#include "fairlens/model.hpp"
#include "fairlens/seeding.hpp"

namespace fairlens {

// Search engines that expand a seed set into discriminatory instances.
enum class GenEngine {
  kAequitas,  // random global probe + probability-guided local walk
  kAdf,       // gradient-guided global and local search (needs gradients)
};

std::string_view engine_name(GenEngine engine);
GenEngine parse_engine(std::string_view name);

// Evaluation budgets for one generation run. The global phase may evaluate
// at most `global_limit` candidate instances; each discriminatory instance
// it finds receives `local_limit` local perturbation steps. `seed_limit`
// is the upstream seeding budget and may not exceed `global_limit`.
struct GenBudget {
  int seed_limit = 100;
  int global_limit = 100;
  int local_limit = 100;

  bool operator==(const GenBudget&) const = default;
};

// Throws ConfigError when limits are out of range or inconsistent.
void validate_budget(const GenBudget& budget);

struct GenResult {
  // Discriminatory instances found by this run, deduplicated by value
  // vector in discovery order; provenance records the discovering phase.
  std::vector<IdiRecord> idis;
  long long explored = 0;      // candidate instances evaluated in total
  long long global_count = 0;  // candidates evaluated in the global phase
  long long local_count = 0;   // candidates evaluated in the local phase
  double wall_time = 0.0;      // seconds, informational only
};

// AEQUITAS-style search: the global phase probes each seed directly; every
// discriminatory instance found then seeds a local random walk that picks a
// non-protected attribute from an adaptive probability vector, shifts it by
// one domain step, and rewards attributes that keep producing hits.
GenResult generate_aequitas(const TrainedModel& m, const SeedSet& seeds,
                            const std::vector<std::string>& protected_attrs,
                            const GenBudget& budget = {},
                            uint64_t rng_seed = 0);

// ADF-style search: the global phase walks each seed against the gradient
// sign agreement between the instance and its most divergent protected
// variant; the local phase nudges the attribute with the smallest mean
// absolute gradient. Requires a differentiable model.
GenResult generate_adf(const TrainedModel& m, const SeedSet& seeds,
                       const std::vector<std::string>& protected_attrs,
                       const GenBudget& budget = {}, uint64_t rng_seed = 0);

// Dispatch on `engine`.
GenResult generate(GenEngine engine, const TrainedModel& m,
                   const SeedSet& seeds,
                   const std::vector<std::string>& protected_attrs,
                   const GenBudget& budget = {}, uint64_t rng_seed = 0);

// One (seeding strategy, search engine) pairing for a comparison run.
struct CompareConfigEntry {
  SeedStrategy strategy = SeedStrategy::kRandom;
  GenEngine engine = GenEngine::kAequitas;
};

struct CompareRow {
  CompareConfigEntry config;
  std::vector<long long> trial_idis;  // discriminatory instances per trial
  std::vector<double> trial_rates;    // idis / explored per trial
  std::vector<double> trial_wall;     // seconds per trial
  double mean_idis = 0.0;
  double mean_rate = 0.0;
  double mean_wall = 0.0;
};

struct ComparisonTable {
  std::vector<CompareRow> rows;
  int trials = 0;
};

// Trains one model on `ds`, then runs every configuration `trials` times
// with RNG streams derived from `rng_seed` and reports per-config means.
ComparisonTable compare_engines(const std::vector<CompareConfigEntry>& configs,
                                const Dataset& ds,
                                const std::vector<std::string>& protected_attrs,
                                const GenBudget& budget, int trials,
                                uint64_t rng_seed,
                                ModelKind kind = ModelKind::kMlp,
                                const TrainConfig& train_cfg = {});

// CSV rendering; pass include_timings=false for byte-stable output.
std::string comparison_to_csv(const ComparisonTable& table,
                              bool include_timings = true);

}  // namespace fairlens

#endif  // FAIRLENS_GENERATION_HPP_
