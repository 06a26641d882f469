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

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"
#include "model_internal.hpp"

namespace fairlens {
namespace internal {

Eigen::VectorXd linear_proba(const LinearParams& p, const Eigen::MatrixXd& X) {
  Eigen::VectorXd z = X * p.w;
  z.array() += p.b;
  return 1.0 / (1.0 + (-z.array()).exp());
}

LinearParams fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const TrainConfig& config, int passes,
                          const LinearParams* init) {
  const auto m = static_cast<double>(X.rows());
  LinearParams p;
  if (init) {
    p = *init;
  } else {
    p.w = Eigen::VectorXd::Zero(X.cols());
    p.b = 0.0;
  }
  const double lr = config.lr_learning_rate;
  for (int iter = 0; iter < passes; ++iter) {
    const Eigen::VectorXd proba = linear_proba(p, X);
    const Eigen::VectorXd residual = proba - y;
    p.w -= lr / m * (X.transpose() * residual);
    p.b -= lr / m * residual.sum();
    if (!p.w.allFinite() || !std::isfinite(p.b))
      throw ComputeError("logistic regression diverged at iteration " +
                         std::to_string(iter + 1));
  }
  return p;
}

LinearParams fit_svm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const TrainConfig& config, int passes,
                     const LinearParams* init, uint64_t rng_seed) {
  LinearParams p;
  if (init) {
    p = *init;
  } else {
    p.w = Eigen::VectorXd::Zero(X.cols());
    p.b = 0.0;
  }
  const double lr = config.svm_learning_rate;
  const double l2 = config.svm_l2;
  std::vector<size_t> order(static_cast<size_t>(X.rows()));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(rng_seed);
  for (int epoch = 0; epoch < passes; ++epoch) {
    rng.shuffle(order);
    for (size_t i : order) {
      const auto row = X.row(static_cast<Eigen::Index>(i));
      const double sign = y(static_cast<Eigen::Index>(i)) > 0.5 ? 1.0 : -1.0;
      const double margin = sign * (row.dot(p.w) + p.b);
      if (margin < 1.0) {
        p.w = (1.0 - lr * l2) * p.w + lr * sign * row.transpose();
        p.b += lr * sign;
      } else {
        p.w *= 1.0 - lr * l2;
      }
    }
    if (!p.w.allFinite() || !std::isfinite(p.b))
      throw ComputeError("SVM training diverged at epoch " +
                         std::to_string(epoch + 1));
  }
  return p;
}

}  // namespace internal
}  // namespace fairlens
