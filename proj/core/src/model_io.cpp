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

#include "fairlens/model_io.hpp"

#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "fairlens/dataset_io.hpp"
#include "fairlens/error.hpp"
#include "json.hpp"

namespace fairlens {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    rows.push_back(vector_to_json(m.row(r).transpose()));
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (j.empty()) return Eigen::MatrixXd(0, 0);
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j.at(static_cast<size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw DataError("model file: ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = row.at(static_cast<size_t>(c)).get<double>();
  }
  return m;
}

json params_to_json(const ModelParams& params) {
  json j;
  if (const auto* linear = std::get_if<LinearParams>(&params)) {
    j["w"] = vector_to_json(linear->w);
    j["b"] = linear->b;
  } else if (const auto* tree = std::get_if<TreeParams>(&params)) {
    json nodes = json::array();
    for (const TreeNode& n : tree->nodes) {
      nodes.push_back(json{{"feature", n.feature},
                           {"threshold", n.threshold},
                           {"left", n.left},
                           {"right", n.right},
                           {"p1", n.p1}});
    }
    j["nodes"] = std::move(nodes);
  } else {
    const auto& mlp = std::get<MlpParams>(params);
    json weights = json::array();
    json biases = json::array();
    for (const auto& w : mlp.weights) weights.push_back(matrix_to_json(w));
    for (const auto& b : mlp.biases) biases.push_back(vector_to_json(b));
    j["weights"] = std::move(weights);
    j["biases"] = std::move(biases);
  }
  return j;
}

ModelParams params_from_json(ModelKind kind, const json& j) {
  switch (kind) {
    case ModelKind::kLogistic:
    case ModelKind::kSvm: {
      LinearParams p;
      p.w = vector_from_json(j.at("w"));
      p.b = j.at("b").get<double>();
      return p;
    }
    case ModelKind::kTree: {
      TreeParams p;
      for (const json& n : j.at("nodes")) {
        TreeNode node;
        node.feature = n.at("feature").get<int>();
        node.threshold = n.at("threshold").get<double>();
        node.left = n.at("left").get<int>();
        node.right = n.at("right").get<int>();
        node.p1 = n.at("p1").get<double>();
        p.nodes.push_back(node);
      }
      if (p.nodes.empty()) throw DataError("model file: tree has no nodes");
      return p;
    }
    case ModelKind::kMlp: {
      MlpParams p;
      for (const json& w : j.at("weights"))
        p.weights.push_back(matrix_from_json(w));
      for (const json& b : j.at("biases"))
        p.biases.push_back(vector_from_json(b));
      if (p.weights.size() != p.biases.size() || p.weights.empty())
        throw DataError("model file: inconsistent MLP layers");
      return p;
    }
  }
  throw DataError("model file: unknown kind");
}

json config_to_json(const TrainConfig& c) {
  return json{{"lr_iterations", c.lr_iterations},
              {"lr_learning_rate", c.lr_learning_rate},
              {"svm_epochs", c.svm_epochs},
              {"svm_learning_rate", c.svm_learning_rate},
              {"svm_l2", c.svm_l2},
              {"tree_max_depth", c.tree_max_depth},
              {"tree_min_leaf", c.tree_min_leaf},
              {"mlp",
               {{"layer_widths", c.mlp.layer_widths},
                {"epochs", c.mlp.epochs},
                {"batch_size", c.mlp.batch_size},
                {"learning_rate", c.mlp.learning_rate}}}};
}

TrainConfig config_from_json(const json& j) {
  TrainConfig c;
  c.lr_iterations = j.at("lr_iterations").get<int>();
  c.lr_learning_rate = j.at("lr_learning_rate").get<double>();
  c.svm_epochs = j.at("svm_epochs").get<int>();
  c.svm_learning_rate = j.at("svm_learning_rate").get<double>();
  c.svm_l2 = j.at("svm_l2").get<double>();
  c.tree_max_depth = j.at("tree_max_depth").get<int>();
  c.tree_min_leaf = j.at("tree_min_leaf").get<int>();
  const json& mlp = j.at("mlp");
  c.mlp.layer_widths = mlp.at("layer_widths").get<std::vector<int>>();
  c.mlp.epochs = mlp.at("epochs").get<int>();
  c.mlp.batch_size = mlp.at("batch_size").get<int>();
  c.mlp.learning_rate = mlp.at("learning_rate").get<double>();
  return c;
}

}  // namespace

std::string model_to_json(const TrainedModel& m) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = model_kind_name(m.kind());
  j["schema"] = schema_to_text(m.schema());
  j["config"] = config_to_json(m.config());
  j["parameters"] = params_to_json(m.params());
  return j.dump(2);
}

TrainedModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kFormatVersion)
      throw DataError("model file format version " + std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(kFormatVersion) + ")");
    const ModelKind kind = parse_model_kind(j.at("kind").get<std::string>());
    DatasetSchema schema = parse_schema(j.at("schema").get<std::string>());
    TrainConfig config = config_from_json(j.at("config"));
    ModelParams params = params_from_json(kind, j.at("parameters"));
    return TrainedModel(kind, std::move(schema), std::move(config),
                        std::move(params));
  } catch (const json::exception& e) {
    throw DataError(std::string("model file is malformed: ") + e.what());
  }
}

void save_model(const TrainedModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file '" + path + "'");
  out << model_to_json(m) << '\n';
  if (!out) throw DataError("failed writing model file '" + path + "'");
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace fairlens
