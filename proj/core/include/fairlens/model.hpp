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

#ifndef FAIRLENS_MODEL_HPP_
#define FAIRLENS_MODEL_HPP_

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fairlens/dataset.hpp"

namespace fairlens {

enum class ModelKind { kLogistic, kSvm, kTree, kMlp };

std::string model_kind_name(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);  // throws ConfigError

struct MlpConfig {
  // Output width of each layer; the final layer must have width 1. Hidden
  // layers use ReLU, the output layer a sigmoid.
  std::vector<int> layer_widths = {30, 20, 15, 10, 5, 1};
  int epochs = 30;
  int batch_size = 128;
  double learning_rate = 0.01;
};

// Hyperparameters for every model kind; only the section matching the kind
// being trained is consulted.
struct TrainConfig {
  // Logistic regression: full-batch gradient descent on cross-entropy.
  int lr_iterations = 200;
  double lr_learning_rate = 0.1;

  // Linear SVM: hinge-loss SGD with L2 regularization; probabilities are a
  // sigmoid of the signed margin.
  int svm_epochs = 200;
  double svm_learning_rate = 0.01;
  double svm_l2 = 1e-4;

  // CART decision tree with Gini impurity.
  int tree_max_depth = 8;
  int tree_min_leaf = 5;

  // MLP trained with Nadam (beta1 0.9, beta2 0.999, eps 1e-8) on binary
  // cross-entropy.
  MlpConfig mlp;

  bool operator==(const TrainConfig&) const = default;
};

inline bool operator==(const MlpConfig& a, const MlpConfig& b) {
  return a.layer_widths == b.layer_widths && a.epochs == b.epochs &&
         a.batch_size == b.batch_size && a.learning_rate == b.learning_rate;
}

// Learned state per kind. Public so serialization and tests can construct
// models directly, but treat as opaque elsewhere.
struct LinearParams {
  Eigen::VectorXd w;
  double b = 0.0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // on scaled values; x <= threshold goes left
  int left = -1;
  int right = -1;
  double p1 = 0.0;  // leaf probability of class 1
};

struct TreeParams {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct MlpParams {
  std::vector<Eigen::MatrixXd> weights;  // weights[l] is out_l x in_l
  std::vector<Eigen::VectorXd> biases;
};

using ModelParams = std::variant<LinearParams, TreeParams, MlpParams>;

// An immutable trained binary classifier. Prediction is a pure function of
// the stored parameters; features are min-max scaled internally from the
// schema's domain bounds, so any instance in the schema's input space is
// predictable regardless of the training split. All probabilities score
// class 1; the hard label is p >= 0.5.
class TrainedModel {
 public:
  TrainedModel(ModelKind kind, DatasetSchema schema, TrainConfig config,
               ModelParams params);

  ModelKind kind() const { return kind_; }
  const DatasetSchema& schema() const { return schema_; }
  const TrainConfig& config() const { return config_; }
  uint64_t schema_fingerprint() const { return fingerprint_; }
  const ModelParams& params() const { return params_; }

  double predict_proba(const Instance& x) const;
  int predict(const Instance& x) const {
    return predict_proba(x) >= 0.5 ? 1 : 0;
  }
  std::vector<int> predict(const std::vector<Instance>& rows) const;

  // Batched probability over pre-scaled feature rows (one instance per
  // matrix row). This is the hot path for Shapley evaluation.
  Eigen::VectorXd predict_proba_scaled(const Eigen::MatrixXd& scaled) const;

  // Gradient of the class-1 probability with respect to the scaled input
  // vector, by backpropagation. Only the MLP is differentiable; other kinds
  // raise ComputeError.
  Eigen::VectorXd input_gradient(const Instance& x) const;

 private:
  void check_arity(const Instance& x) const;

  ModelKind kind_;
  DatasetSchema schema_;
  TrainConfig config_;
  ModelParams params_;
  uint64_t fingerprint_;
};

// Trains a model of the given kind. Deterministic given (ds, config,
// rng_seed). Raises DataError when ds is empty or single-class and
// ComputeError when optimization produces a non-finite loss.
TrainedModel train(ModelKind kind, const Dataset& ds, const TrainConfig& config,
                   uint64_t rng_seed);

// Continues optimization from m's parameters for `epochs` further passes
// over `ds` (full-batch iterations for LR, SGD epochs for SVM, Nadam epochs
// for the MLP). The decision tree cannot be trained incrementally and is
// re-fit from scratch on `ds` with the same hyperparameters. epochs = 0
// returns the model unchanged (tree included). Architecture and config are
// preserved exactly.
TrainedModel continue_training(const TrainedModel& m, const Dataset& ds,
                               int epochs, uint64_t rng_seed);

// Weighted F1: per-class F1 averaged with class-support weights.
double f1_score(const TrainedModel& m, const Dataset& ds);
// F1 treating class 0 (index 0) and class 1 (index 1) as the positive class.
std::array<double, 2> f1_per_class(const TrainedModel& m, const Dataset& ds);

// Majority label over exactly four models sharing one schema: the label with
// at least three votes, or the tiebreak model's prediction on a 2-2 split.
int majority_vote_label(const std::vector<const TrainedModel*>& models,
                        const Instance& x, const TrainedModel& tiebreak);

}  // namespace fairlens

#endif  // FAIRLENS_MODEL_HPP_
