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

#ifndef FAIRLENS_SHAP_HPP_
#define FAIRLENS_SHAP_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <optional>

#include "fairlens/dataset.hpp"
#include "fairlens/model.hpp"

namespace fairlens {

enum class ShapMode { kExact, kSampled };

std::string shap_mode_name(ShapMode mode);
ShapMode parse_shap_mode(const std::string& name);  // throws ConfigError

// Additive decomposition of one prediction: the model's class-1 probability
// for `instance` equals base_value plus the sum of per-attribute values
// (exactly in exact mode, by constraint in sampled mode).
struct ShapVector {
  Eigen::VectorXd values;
  double base_value = 0.0;
  Instance instance{std::vector<int>{}};
  ShapMode mode = ShapMode::kExact;
};

// Exact enumeration is the default up to this many attributes; beyond it the
// sampled estimator takes over.
inline constexpr int kShapExactDefaultLimit = 16;
// Hard ceiling for exact mode (2^n coalition values are materialized).
inline constexpr int kShapExactHardLimit = 20;
// Coalition budget used when the sampled mode is chosen automatically.
inline constexpr int kShapDefaultCoalitions = 2048;

// Mean class-1 probability over the background rows. The background must be
// non-empty and share the model's schema.
double base_value(const TrainedModel& m, const Dataset& background);

// Classical Shapley values by full coalition enumeration with interventional
// masking: v(S) is the mean model output over background rows with x's
// values substituted on S. Additive to 1e-9. Raises ConfigError beyond
// kShapExactHardLimit attributes (use shap_sampled instead).
ShapVector shap_exact(const TrainedModel& m, const Instance& x,
                      const Dataset& background);

// Kernel-weighted least-squares estimate over sampled coalitions, with the
// additivity constraint imposed exactly. Deterministic given rng_seed.
// Coalition sizes are enumerated completely while the budget allows
// (smallest and largest first, where the kernel weight concentrates) and the
// remainder is sampled in proportion to the kernel mass. With n_coalitions
// at least 2^n - 2 every coalition is enumerated and the estimate equals the
// exact values. Requires n_coalitions >= 2n + 2.
ShapVector shap_sampled(const TrainedModel& m, const Instance& x,
                        const Dataset& background, int n_coalitions,
                        uint64_t rng_seed);

struct ShapOptions {
  std::optional<ShapMode> mode;  // unset: exact up to the default limit
  int n_coalitions = kShapDefaultCoalitions;  // sampled mode only
  uint64_t rng_seed = 0;                      // sampled mode only
};

// Mode-dispatching front end used by the seeding pipeline and the CLI.
ShapVector shap_values(const TrainedModel& m, const Instance& x,
                       const Dataset& background,
                       const ShapOptions& opts = {});

// Condenses a training split into at most max_rows representative rows: one
// k-means medoid per cluster (the training row nearest each centroid).
// Splits with at most max_rows rows are returned unchanged.
Dataset make_background(const Dataset& train, int max_rows,
                        uint64_t rng_seed);

}  // namespace fairlens

#endif  // FAIRLENS_SHAP_HPP_
