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
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"
#include "model_internal.hpp"

namespace fairlens {
namespace internal {
namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;

void check_mlp_config(const MlpConfig& config) {
  if (config.layer_widths.empty())
    throw ConfigError("MLP needs at least one layer");
  if (config.layer_widths.back() != 1)
    throw ConfigError("MLP output layer must have width 1");
  for (int w : config.layer_widths)
    if (w < 1) throw ConfigError("MLP layer widths must be positive");
  if (config.batch_size < 1)
    throw ConfigError("MLP batch size must be positive");
  if (config.learning_rate <= 0)
    throw ConfigError("MLP learning rate must be positive");
}

MlpParams glorot_init(int inputs, const MlpConfig& config, Rng* rng) {
  MlpParams p;
  int in = inputs;
  for (int out : config.layer_widths) {
    const double limit = std::sqrt(6.0 / (in + out));
    Eigen::MatrixXd w(out, in);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c)
        w(r, c) = (2.0 * rng->uniform_real() - 1.0) * limit;
    p.weights.push_back(std::move(w));
    p.biases.push_back(Eigen::VectorXd::Zero(out));
    in = out;
  }
  return p;
}

// Forward pass over a column batch, keeping pre-activations for backprop.
// layers are ReLU except the last, whose sigmoid the caller applies.
void forward(const MlpParams& p, const Eigen::MatrixXd& input,
             std::vector<Eigen::MatrixXd>* activations,
             std::vector<Eigen::MatrixXd>* pre) {
  activations->clear();
  pre->clear();
  activations->push_back(input);
  const size_t layers = p.weights.size();
  for (size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z =
        (p.weights[l] * activations->back()).colwise() + p.biases[l];
    pre->push_back(z);
    if (l + 1 < layers)
      activations->push_back(z.cwiseMax(0.0));
    else
      activations->push_back(std::move(z));  // logits; sigmoid applied later
  }
}

struct NadamState {
  std::vector<Eigen::MatrixXd> mw, vw;
  std::vector<Eigen::VectorXd> mb, vb;
  long step = 0;

  explicit NadamState(const MlpParams& p) {
    for (const auto& w : p.weights) {
      mw.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
      vw.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    for (const auto& b : p.biases) {
      mb.push_back(Eigen::VectorXd::Zero(b.size()));
      vb.push_back(Eigen::VectorXd::Zero(b.size()));
    }
  }

  // Nadam: Adam with Nesterov momentum in its standard framework form,
  // applied elementwise.
  template <typename T>
  void apply(T* theta, T* m, T* v, const T& g, double lr) {
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
    m->array() = kBeta1 * m->array() + (1.0 - kBeta1) * g.array();
    v->array() = kBeta2 * v->array() + (1.0 - kBeta2) * g.array().square();
    theta->array() -=
        lr *
        (kBeta1 * m->array() / bc1 + (1.0 - kBeta1) * g.array() / bc1) /
        ((v->array() / bc2).sqrt() + kEps);
  }

  void update(MlpParams* p, const std::vector<Eigen::MatrixXd>& gw,
              const std::vector<Eigen::VectorXd>& gb, double lr) {
    ++step;
    for (size_t l = 0; l < p->weights.size(); ++l) {
      apply(&p->weights[l], &mw[l], &vw[l], gw[l], lr);
      apply(&p->biases[l], &mb[l], &vb[l], gb[l], lr);
    }
  }
};

}  // namespace

Eigen::VectorXd mlp_proba(const MlpParams& p, const Eigen::MatrixXd& X) {
  if (p.weights.empty()) throw ComputeError("MLP has no layers");
  if (X.cols() != p.weights.front().cols())
    throw DataError("MLP input width mismatch");
  Eigen::MatrixXd a = X.transpose();
  for (size_t l = 0; l < p.weights.size(); ++l) {
    Eigen::MatrixXd z = (p.weights[l] * a).colwise() + p.biases[l];
    if (l + 1 < p.weights.size())
      a = z.cwiseMax(0.0);
    else
      a = std::move(z);
  }
  return (1.0 / (1.0 + (-a.row(0).transpose().array()).exp())).matrix();
}

Eigen::VectorXd mlp_input_gradient(const MlpParams& p,
                                   const Eigen::VectorXd& x) {
  std::vector<Eigen::MatrixXd> activations, pre;
  forward(p, x, &activations, &pre);
  const double z_out = pre.back()(0, 0);
  const double prob = sigmoid(z_out);
  // d p / d z_out for the sigmoid output.
  Eigen::MatrixXd delta(1, 1);
  delta(0, 0) = prob * (1.0 - prob);
  for (size_t l = p.weights.size(); l-- > 0;) {
    Eigen::MatrixXd upstream = p.weights[l].transpose() * delta;
    if (l == 0) return upstream.col(0);
    delta = upstream.cwiseProduct(
        (pre[l - 1].array() > 0.0).cast<double>().matrix());
  }
  throw ComputeError("MLP has no layers");
}

MlpParams fit_mlp(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const MlpConfig& config, int passes, const MlpParams* init,
                  uint64_t rng_seed) {
  check_mlp_config(config);
  const auto n_rows = static_cast<size_t>(X.rows());
  Rng rng(rng_seed);
  MlpParams p;
  if (init) {
    if (init->weights.empty() ||
        init->weights.front().cols() != X.cols())
      throw DataError("MLP continuation parameters do not fit the data");
    p = *init;
  } else {
    p = glorot_init(static_cast<int>(X.cols()), config, &rng);
  }
  NadamState opt(p);

  std::vector<size_t> order(n_rows);
  std::iota(order.begin(), order.end(), 0);
  const size_t batch = static_cast<size_t>(config.batch_size);
  std::vector<Eigen::MatrixXd> activations, pre, grad_w;
  std::vector<Eigen::VectorXd> grad_b;
  for (int epoch = 0; epoch < passes; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (size_t start = 0; start < n_rows; start += batch) {
      const size_t count = std::min(batch, n_rows - start);
      Eigen::MatrixXd xb(X.cols(), count);
      Eigen::RowVectorXd yb(count);
      for (size_t i = 0; i < count; ++i) {
        xb.col(static_cast<Eigen::Index>(i)) =
            X.row(static_cast<Eigen::Index>(order[start + i])).transpose();
        yb(static_cast<Eigen::Index>(i)) =
            y(static_cast<Eigen::Index>(order[start + i]));
      }

      forward(p, xb, &activations, &pre);
      const Eigen::RowVectorXd logits = activations.back().row(0);
      // Numerically stable binary cross-entropy on logits.
      epoch_loss += (logits.array().max(0.0) - logits.array() * yb.array() +
                     (-logits.array().abs()).exp().log1p())
                        .sum();

      const Eigen::RowVectorXd probs =
          1.0 / (1.0 + (-logits.array()).exp());
      Eigen::MatrixXd delta =
          (probs - yb) / static_cast<double>(count);  // 1 x count

      grad_w.assign(p.weights.size(), {});
      grad_b.assign(p.weights.size(), {});
      for (size_t l = p.weights.size(); l-- > 0;) {
        grad_w[l] = delta * activations[l].transpose();
        grad_b[l] = delta.rowwise().sum();
        if (l > 0) {
          delta = (p.weights[l].transpose() * delta)
                      .cwiseProduct(
                          (pre[l - 1].array() > 0.0).cast<double>().matrix());
        }
      }
      opt.update(&p, grad_w, grad_b, config.learning_rate);
    }
    if (!std::isfinite(epoch_loss))
      throw ComputeError("MLP training diverged (non-finite loss) at epoch " +
                         std::to_string(epoch + 1));
  }
  return p;
}

}  // namespace internal
}  // namespace fairlens
