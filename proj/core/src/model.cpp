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

#include "fairlens/model.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"
#include "model_internal.hpp"

namespace fairlens {

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLogistic:
      return "logistic";
    case ModelKind::kSvm:
      return "svm";
    case ModelKind::kTree:
      return "tree";
    case ModelKind::kMlp:
      return "mlp";
  }
  throw ConfigError("unknown model kind");
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "logistic" || name == "lr") return ModelKind::kLogistic;
  if (name == "svm") return ModelKind::kSvm;
  if (name == "tree" || name == "dt") return ModelKind::kTree;
  if (name == "mlp") return ModelKind::kMlp;
  throw ConfigError("unknown model kind '" + name +
                    "' (expected logistic, svm, tree, or mlp)");
}

TrainedModel::TrainedModel(ModelKind kind, DatasetSchema schema,
                           TrainConfig config, ModelParams params)
    : kind_(kind),
      schema_(std::move(schema)),
      config_(std::move(config)),
      params_(std::move(params)),
      fingerprint_(schema_.fingerprint()) {
  schema_.validate();
  const bool shape_ok =
      (kind_ == ModelKind::kTree) == std::holds_alternative<TreeParams>(params_);
  const bool mlp_ok =
      (kind_ == ModelKind::kMlp) == std::holds_alternative<MlpParams>(params_);
  if (!shape_ok || !mlp_ok)
    throw ConfigError("model parameters do not match the model kind");
}

void TrainedModel::check_arity(const Instance& x) const {
  if (x.values.size() != schema_.attribute_count())
    throw DataError("instance has " + std::to_string(x.values.size()) +
                    " values but the model's schema has " +
                    std::to_string(schema_.attribute_count()) +
                    " attributes");
}

double TrainedModel::predict_proba(const Instance& x) const {
  check_arity(x);
  const Eigen::VectorXd scaled = scaled_row(schema_, x);
  switch (kind_) {
    case ModelKind::kLogistic:
    case ModelKind::kSvm: {
      const auto& p = std::get<LinearParams>(params_);
      return internal::sigmoid(p.w.dot(scaled) + p.b);
    }
    case ModelKind::kTree: {
      const auto& p = std::get<TreeParams>(params_);
      int node = 0;
      while (p.nodes[static_cast<size_t>(node)].feature >= 0) {
        const TreeNode& n = p.nodes[static_cast<size_t>(node)];
        node = scaled(n.feature) <= n.threshold ? n.left : n.right;
      }
      return p.nodes[static_cast<size_t>(node)].p1;
    }
    case ModelKind::kMlp: {
      const auto& p = std::get<MlpParams>(params_);
      return internal::mlp_proba(p, scaled.transpose())(0);
    }
  }
  throw ComputeError("unreachable model kind");
}

std::vector<int> TrainedModel::predict(const std::vector<Instance>& rows) const {
  const Eigen::VectorXd probs = predict_proba_scaled(scaled_rows(schema_, rows));
  std::vector<int> labels(rows.size());
  for (size_t i = 0; i < rows.size(); ++i)
    labels[i] = probs(static_cast<Eigen::Index>(i)) >= 0.5 ? 1 : 0;
  return labels;
}

Eigen::VectorXd TrainedModel::predict_proba_scaled(
    const Eigen::MatrixXd& scaled) const {
  if (scaled.cols() != static_cast<Eigen::Index>(schema_.attribute_count()))
    throw DataError("scaled matrix has " + std::to_string(scaled.cols()) +
                    " columns but the model's schema has " +
                    std::to_string(schema_.attribute_count()) +
                    " attributes");
  switch (kind_) {
    case ModelKind::kLogistic:
    case ModelKind::kSvm:
      return internal::linear_proba(std::get<LinearParams>(params_), scaled);
    case ModelKind::kTree:
      return internal::tree_proba(std::get<TreeParams>(params_), scaled);
    case ModelKind::kMlp:
      return internal::mlp_proba(std::get<MlpParams>(params_), scaled);
  }
  throw ComputeError("unreachable model kind");
}

Eigen::VectorXd TrainedModel::input_gradient(const Instance& x) const {
  if (kind_ != ModelKind::kMlp)
    throw ComputeError("input_gradient requires a differentiable model; " +
                       model_kind_name(kind_) + " is not");
  check_arity(x);
  return internal::mlp_input_gradient(std::get<MlpParams>(params_),
                                      scaled_row(schema_, x));
}

namespace {

void check_trainable(const Dataset& ds) {
  ds.validate();
  if (ds.size() == 0) throw DataError("training dataset is empty");
  const int first = ds.labels.front();
  const bool two_classes =
      std::any_of(ds.labels.begin(), ds.labels.end(),
                  [first](int l) { return l != first; });
  if (!two_classes)
    throw DataError("training dataset contains a single class (" +
                    std::to_string(first) + ")");
}

Eigen::VectorXd label_vector(const Dataset& ds) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(ds.size()));
  for (size_t i = 0; i < ds.size(); ++i)
    y(static_cast<Eigen::Index>(i)) = ds.labels[i];
  return y;
}

ModelParams fit_params(ModelKind kind, const Dataset& ds,
                       const TrainConfig& config, uint64_t rng_seed,
                       int passes, const ModelParams* init) {
  const Eigen::MatrixXd X = scaled_rows(ds.schema, ds.rows);
  const Eigen::VectorXd y = label_vector(ds);
  switch (kind) {
    case ModelKind::kLogistic:
      return internal::fit_logistic(
          X, y, config, passes,
          init ? &std::get<LinearParams>(*init) : nullptr);
    case ModelKind::kSvm:
      return internal::fit_svm(X, y, config, passes,
                               init ? &std::get<LinearParams>(*init) : nullptr,
                               derive_seed(rng_seed, "train/svm"));
    case ModelKind::kTree:
      return internal::fit_tree(X, y, config);
    case ModelKind::kMlp:
      return internal::fit_mlp(X, y, config.mlp, passes,
                               init ? &std::get<MlpParams>(*init) : nullptr,
                               derive_seed(rng_seed, "train/mlp"));
  }
  throw ConfigError("unknown model kind");
}

int default_passes(ModelKind kind, const TrainConfig& config) {
  switch (kind) {
    case ModelKind::kLogistic:
      return config.lr_iterations;
    case ModelKind::kSvm:
      return config.svm_epochs;
    case ModelKind::kTree:
      return 1;
    case ModelKind::kMlp:
      return config.mlp.epochs;
  }
  throw ConfigError("unknown model kind");
}

}  // namespace

TrainedModel train(ModelKind kind, const Dataset& ds, const TrainConfig& config,
                   uint64_t rng_seed) {
  check_trainable(ds);
  ModelParams params = fit_params(kind, ds, config, rng_seed,
                                  default_passes(kind, config), nullptr);
  return TrainedModel(kind, ds.schema, config, std::move(params));
}

TrainedModel continue_training(const TrainedModel& m, const Dataset& ds,
                               int epochs, uint64_t rng_seed) {
  if (epochs < 0) throw ConfigError("continue_training: epochs must be >= 0");
  if (ds.schema.fingerprint() != m.schema_fingerprint())
    throw DataError("continue_training: dataset schema does not match the "
                    "model's schema");
  if (epochs == 0) return m;
  check_trainable(ds);
  // The tree has no incremental mode: re-fit on the given data with the same
  // hyperparameters. All other kinds continue from the current parameters.
  const ModelParams* init =
      m.kind() == ModelKind::kTree ? nullptr : &m.params();
  ModelParams params = fit_params(m.kind(), ds, m.config(), rng_seed,
                                  epochs, init);
  return TrainedModel(m.kind(), m.schema(), m.config(), std::move(params));
}

std::array<double, 2> f1_per_class(const TrainedModel& m, const Dataset& ds) {
  if (ds.size() == 0) throw DataError("f1_score: dataset is empty");
  const std::vector<int> predicted = m.predict(ds.rows);
  std::array<double, 2> f1{};
  for (int cls = 0; cls < 2; ++cls) {
    int tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < ds.size(); ++i) {
      const bool truth = ds.labels[i] == cls;
      const bool pred = predicted[i] == cls;
      if (truth && pred) ++tp;
      if (!truth && pred) ++fp;
      if (truth && !pred) ++fn;
    }
    const double denom = 2.0 * tp + fp + fn;
    f1[static_cast<size_t>(cls)] = denom > 0 ? 2.0 * tp / denom : 0.0;
  }
  return f1;
}

double f1_score(const TrainedModel& m, const Dataset& ds) {
  const std::array<double, 2> f1 = f1_per_class(m, ds);
  const auto support1 =
      static_cast<double>(std::count(ds.labels.begin(), ds.labels.end(), 1));
  const double w1 = support1 / static_cast<double>(ds.size());
  return (1.0 - w1) * f1[0] + w1 * f1[1];
}

int majority_vote_label(const std::vector<const TrainedModel*>& models,
                        const Instance& x, const TrainedModel& tiebreak) {
  if (models.size() != 4)
    throw ConfigError("majority_vote_label expects exactly 4 models, got " +
                      std::to_string(models.size()));
  const uint64_t fp = models.front()->schema_fingerprint();
  for (const TrainedModel* m : models)
    if (m->schema_fingerprint() != fp)
      throw DataError("majority_vote_label: models disagree on the schema");
  if (tiebreak.schema_fingerprint() != fp)
    throw DataError("majority_vote_label: tiebreak model schema mismatch");

  int ones = 0;
  for (const TrainedModel* m : models) ones += m->predict(x);
  if (ones >= 3) return 1;
  if (ones <= 1) return 0;
  return tiebreak.predict(x);
}

}  // namespace fairlens
