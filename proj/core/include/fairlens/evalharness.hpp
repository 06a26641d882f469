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

#ifndef FAIRLENS_EVALHARNESS_HPP_
#define FAIRLENS_EVALHARNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fairlens/dataset.hpp"
#include "fairlens/discrimination.hpp"
#include "fairlens/generation.hpp"
#include "fairlens/model.hpp"

namespace fairlens {

// Result of retraining one arm: the retrained model plus the shared
// yardstick it was measured against.
struct RetrainOutcome {
  TrainedModel retrained;
  std::vector<Instance> test_cases;  // shared, deduplicated
  long long remaining_before = 0;    // IDIs among test_cases under the original
  long long remaining_after = 0;     // ... under the retrained model
  double f1_before = 0.0;            // held-out weighted F1 of the original
  double f1_after = 0.0;             // ... of the retrained model
};

// Labels each discriminatory instance (not its witness) by majority vote of
// the four oracle models, with `tiebreak` deciding 2-2 splits, and returns
// them as dataset rows ready to append to training data.
Dataset label_idis(const std::vector<IdiRecord>& idis,
                   const std::vector<const TrainedModel*>& oracle_models,
                   const TrainedModel& tiebreak);

// Continues optimization from m's checkpoint on train ∪ labeled_idis for
// `epochs` epochs (trees are re-fit on the augmented data with the same
// hyperparameters). epochs = 0 returns the model unchanged. When
// `from_scratch` is set, a fresh model is trained on the augmented data
// with m's configuration instead of continuing from the checkpoint.
TrainedModel retrain(const TrainedModel& m, const Dataset& train,
                     const Dataset& labeled_idis, int epochs = 10,
                     uint64_t rng_seed = 0, bool from_scratch = false);

// Counts the test cases for which an exhaustive discrimination check still
// finds a witness under m. Duplicate test cases count once.
long long measure_remaining(const TrainedModel& m,
                            const std::vector<Instance>& test_cases,
                            const std::vector<std::string>& protected_attrs);

struct HeadToHeadResult {
  RetrainOutcome arm_a;
  RetrainOutcome arm_b;
};

// Runs two (seeding strategy, engine) configurations against one original
// model, pools their discoveries into a shared deduplicated test-case set,
// retrains one copy of the original per arm on its own labeled IDIs, and
// measures both retrained models against the shared set. Identical configs
// receive identical derived RNG streams, so they produce identical arms.
HeadToHeadResult head_to_head(const CompareConfigEntry& config_a,
                              const CompareConfigEntry& config_b,
                              const Dataset& ds,
                              const std::vector<std::string>& protected_attrs,
                              const GenBudget& budget, uint64_t rng_seed,
                              ModelKind kind = ModelKind::kMlp,
                              const TrainConfig& train_cfg = {},
                              int retrain_epochs = 10,
                              bool from_scratch = false);

// JSON rendering of a head-to-head pair (configs, counts, F1 values).
std::string head_to_head_to_json(const HeadToHeadResult& result,
                                 const CompareConfigEntry& config_a,
                                 const CompareConfigEntry& config_b);

// One CSV row (with header helper) mirroring the remaining-IDI table layout.
std::string head_to_head_csv_header();
std::string head_to_head_csv_row(const HeadToHeadResult& result,
                                 const CompareConfigEntry& config_a,
                                 const CompareConfigEntry& config_b,
                                 const std::string& label);

}  // namespace fairlens

#endif  // FAIRLENS_EVALHARNESS_HPP_
