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

#ifndef FAIRLENS_SRC_MODEL_INTERNAL_HPP_
#define FAIRLENS_SRC_MODEL_INTERNAL_HPP_

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

#include "fairlens/model.hpp"

namespace fairlens {
namespace internal {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Kind-specific trainers over pre-scaled features X (rows x features) with
// labels y in {0,1}. Each starts from `init` when given (continuation) or
// from a fresh parameter state otherwise. `passes` is the number of
// iterations/epochs to run.
LinearParams fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const TrainConfig& config, int passes,
                          const LinearParams* init);
LinearParams fit_svm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const TrainConfig& config, int passes,
                     const LinearParams* init, uint64_t rng_seed);
TreeParams fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                    const TrainConfig& config);
MlpParams fit_mlp(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const MlpConfig& config, int passes, const MlpParams* init,
                  uint64_t rng_seed);

// Forward passes over pre-scaled rows.
Eigen::VectorXd linear_proba(const LinearParams& p, const Eigen::MatrixXd& X);
Eigen::VectorXd tree_proba(const TreeParams& p, const Eigen::MatrixXd& X);
Eigen::VectorXd mlp_proba(const MlpParams& p, const Eigen::MatrixXd& X);

// Gradient of the MLP's probability output with respect to one scaled input.
Eigen::VectorXd mlp_input_gradient(const MlpParams& p,
                                   const Eigen::VectorXd& x);

}  // namespace internal
}  // namespace fairlens

#endif  // FAIRLENS_SRC_MODEL_INTERNAL_HPP_
