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

#include <algorithm>
#include <limits>
#include <vector>

#include "fairlens/error.hpp"
#include "model_internal.hpp"

namespace fairlens {
namespace internal {
namespace {

struct Split {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double impurity = std::numeric_limits<double>::infinity();
};

double gini(double ones, double total) {
  if (total <= 0) return 0.0;
  const double p1 = ones / total;
  return 1.0 - p1 * p1 - (1.0 - p1) * (1.0 - p1);
}

// Best Gini split over the given rows; ties resolved toward the lowest
// feature index, then the lowest threshold, by strict-improvement scanning
// in that order.
Split best_split(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                 const std::vector<int>& rows, int min_leaf) {
  Split best;
  const auto n = static_cast<double>(rows.size());
  std::vector<std::pair<double, double>> column(rows.size());  // value, label
  for (int f = 0; f < X.cols(); ++f) {
    for (size_t i = 0; i < rows.size(); ++i)
      column[i] = {X(rows[i], f), y(rows[i])};
    std::sort(column.begin(), column.end());
    double left_ones = 0;
    double total_ones = 0;
    for (const auto& [value, label] : column) total_ones += label;
    for (size_t i = 0; i + 1 < column.size(); ++i) {
      left_ones += column[i].second;
      if (column[i].first == column[i + 1].first) continue;  // no boundary
      const double left_n = static_cast<double>(i + 1);
      const double right_n = n - left_n;
      if (left_n < min_leaf || right_n < min_leaf) continue;
      const double impurity =
          (left_n * gini(left_ones, left_n) +
           right_n * gini(total_ones - left_ones, right_n)) /
          n;
      if (impurity < best.impurity - 1e-12) {
        best.found = true;
        best.feature = f;
        best.threshold = 0.5 * (column[i].first + column[i + 1].first);
        best.impurity = impurity;
      }
    }
  }
  return best;
}

int build_node(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               std::vector<int> rows, int depth, const TrainConfig& config,
               TreeParams* tree) {
  double ones = 0;
  for (int r : rows) ones += y(r);
  const auto n = static_cast<double>(rows.size());

  const int index = static_cast<int>(tree->nodes.size());
  tree->nodes.push_back(TreeNode{});
  tree->nodes.back().p1 = n > 0 ? ones / n : 0.0;

  const bool pure = ones == 0 || ones == n;
  if (depth >= config.tree_max_depth || pure ||
      n < 2.0 * config.tree_min_leaf)
    return index;

  const double node_impurity = gini(ones, n);
  Split split = best_split(X, y, rows, config.tree_min_leaf);
  if (!split.found || split.impurity >= node_impurity - 1e-12) return index;

  std::vector<int> left_rows, right_rows;
  for (int r : rows) {
    if (X(r, split.feature) <= split.threshold)
      left_rows.push_back(r);
    else
      right_rows.push_back(r);
  }
  rows.clear();
  rows.shrink_to_fit();

  tree->nodes[static_cast<size_t>(index)].feature = split.feature;
  tree->nodes[static_cast<size_t>(index)].threshold = split.threshold;
  const int left =
      build_node(X, y, std::move(left_rows), depth + 1, config, tree);
  tree->nodes[static_cast<size_t>(index)].left = left;
  const int right =
      build_node(X, y, std::move(right_rows), depth + 1, config, tree);
  tree->nodes[static_cast<size_t>(index)].right = right;
  return index;
}

}  // namespace

TreeParams fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                    const TrainConfig& config) {
  if (config.tree_max_depth < 0)
    throw ConfigError("tree max depth must be >= 0");
  if (config.tree_min_leaf < 1)
    throw ConfigError("tree min leaf size must be >= 1");
  std::vector<int> rows(static_cast<size_t>(X.rows()));
  for (size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
  TreeParams tree;
  build_node(X, y, std::move(rows), 0, config, &tree);
  return tree;
}

Eigen::VectorXd tree_proba(const TreeParams& p, const Eigen::MatrixXd& X) {
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    int node = 0;
    while (p.nodes[static_cast<size_t>(node)].feature >= 0) {
      const TreeNode& t = p.nodes[static_cast<size_t>(node)];
      node = X(r, t.feature) <= t.threshold ? t.left : t.right;
    }
    out(r) = p.nodes[static_cast<size_t>(node)].p1;
  }
  return out;
}

}  // namespace internal
}  // namespace fairlens
