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

#include "fairlens/shap.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <vector>

#include "fairlens/cluster.hpp"
#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"

namespace fairlens {

std::string shap_mode_name(ShapMode mode) {
  return mode == ShapMode::kExact ? "exact" : "sampled";
}

ShapMode parse_shap_mode(const std::string& name) {
  if (name == "exact") return ShapMode::kExact;
  if (name == "sampled") return ShapMode::kSampled;
  throw ConfigError("unknown shap mode '" + name +
                    "' (expected exact or sampled)");
}

namespace {

// Coalition values are evaluated in blocks of this many hybrid batches so
// the underlying matrix products stay large enough to run at full speed.
constexpr int kCoalitionBlock = 64;

void check_background(const TrainedModel& m, const Dataset& background) {
  if (background.rows.empty())
    throw DataError("Shapley background must be non-empty");
  if (background.schema.fingerprint() != m.schema_fingerprint())
    throw DataError("Shapley background schema does not match the model");
}

void check_instance(const TrainedModel& m, const Instance& x) {
  if (x.size() != m.schema().attribute_count())
    throw DataError("instance has " + std::to_string(x.size()) +
                    " values but the schema has " +
                    std::to_string(m.schema().attribute_count()) +
                    " attributes");
}

// Evaluates v(S) for every requested coalition mask: the mean model output
// over background rows with x's scaled values substituted on S. Masks must
// be listed in an order where consecutive masks differ by few bits (the
// caller uses Gray-code order or size-grouped order); columns are patched
// incrementally between evaluations.
class CoalitionEvaluator {
 public:
  CoalitionEvaluator(const TrainedModel& m, const Eigen::MatrixXd& bg_scaled,
                     const Eigen::VectorXd& x_scaled)
      : model_(m),
        bg_(bg_scaled),
        x_(x_scaled),
        hybrid_(bg_scaled),
        current_mask_(0),
        buffer_(kCoalitionBlock * bg_scaled.rows(), bg_scaled.cols()) {}

  // Queues one coalition for evaluation; flushes internally when the block
  // fills. Call drain() once after the last mask.
  void enqueue(uint64_t mask, double* out) {
    patch_to(mask);
    buffer_.middleRows(static_cast<Eigen::Index>(pending_.size()) *
                           bg_.rows(),
                       bg_.rows()) = hybrid_;
    pending_.push_back(out);
    if (static_cast<int>(pending_.size()) == kCoalitionBlock) flush();
  }

  void drain() { flush(); }

 private:
  void patch_to(uint64_t mask) {
    uint64_t diff = mask ^ current_mask_;
    while (diff != 0) {
      const int j = std::countr_zero(diff);
      diff &= diff - 1;
      if (mask >> j & 1)
        hybrid_.col(j).setConstant(x_(j));
      else
        hybrid_.col(j) = bg_.col(j);
    }
    current_mask_ = mask;
  }

  void flush() {
    if (pending_.empty()) return;
    const Eigen::Index rows =
        static_cast<Eigen::Index>(pending_.size()) * bg_.rows();
    Eigen::VectorXd probs = model_.predict_proba_scaled(buffer_.topRows(rows));
    for (size_t i = 0; i < pending_.size(); ++i)
      *pending_[i] =
          probs.segment(static_cast<Eigen::Index>(i) * bg_.rows(), bg_.rows())
              .mean();
    pending_.clear();
  }

  const TrainedModel& model_;
  const Eigen::MatrixXd& bg_;
  const Eigen::VectorXd& x_;
  Eigen::MatrixXd hybrid_;
  uint64_t current_mask_;
  Eigen::MatrixXd buffer_;
  std::vector<double*> pending_;
};

long double binomial(int n, int k) {
  long double c = 1.0L;
  for (int i = 1; i <= k; ++i)
    c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return c;
}

// Sizes 1..n-1 ordered by descending kernel mass: 1, n-1, 2, n-2, ...
std::vector<int> size_ladder(int n) {
  std::vector<int> sizes;
  for (int s = 1; s <= n - 1 - s; ++s) {
    sizes.push_back(s);
    if (n - s != s) sizes.push_back(n - s);
  }
  if (n % 2 == 0) sizes.push_back(n / 2);  // self-complementary middle size
  std::sort(sizes.begin(), sizes.end(),
            [n](int a, int b) {
              const double ma = 1.0 / (static_cast<double>(a) * (n - a));
              const double mb = 1.0 / (static_cast<double>(b) * (n - b));
              if (ma != mb) return ma > mb;
              return a < b;
            });
  return sizes;
}

}  // namespace

double base_value(const TrainedModel& m, const Dataset& background) {
  check_background(m, background);
  Eigen::MatrixXd scaled = scaled_rows(background.schema, background.rows);
  return m.predict_proba_scaled(scaled).mean();
}

ShapVector shap_exact(const TrainedModel& m, const Instance& x,
                      const Dataset& background) {
  check_background(m, background);
  check_instance(m, x);
  const int n = static_cast<int>(m.schema().attribute_count());
  if (n > kShapExactHardLimit)
    throw ConfigError("exact Shapley enumeration is limited to " +
                      std::to_string(kShapExactHardLimit) +
                      " attributes; use shap_sampled for " +
                      std::to_string(n));

  const Eigen::MatrixXd bg = scaled_rows(background.schema, background.rows);
  const Eigen::VectorXd xs = scaled_row(m.schema(), x);
  const uint64_t total = 1ull << n;
  std::vector<double> v(total);

  CoalitionEvaluator eval(m, bg, xs);
  // Gray-code order: consecutive coalitions differ in exactly one bit, so
  // each step patches a single hybrid column.
  for (uint64_t k = 0; k < total; ++k) {
    const uint64_t mask = k ^ (k >> 1);
    eval.enqueue(mask, &v[mask]);
  }
  eval.drain();

  // w(s) = s! (n-1-s)! / n! in extended precision.
  std::vector<long double> fact(static_cast<size_t>(n) + 1, 1.0L);
  for (int i = 1; i <= n; ++i)
    fact[static_cast<size_t>(i)] =
        fact[static_cast<size_t>(i - 1)] * static_cast<long double>(i);
  std::vector<long double> weight(static_cast<size_t>(n), 0.0L);
  for (int s = 0; s < n; ++s)
    weight[static_cast<size_t>(s)] = fact[static_cast<size_t>(s)] *
                                     fact[static_cast<size_t>(n - 1 - s)] /
                                     fact[static_cast<size_t>(n)];

  std::vector<long double> phi(static_cast<size_t>(n), 0.0L);
  for (uint64_t mask = 0; mask < total; ++mask) {
    const long double w =
        weight[static_cast<size_t>(std::popcount(mask))];
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1) continue;
      phi[static_cast<size_t>(i)] +=
          w * (static_cast<long double>(v[mask | (1ull << i)]) -
               static_cast<long double>(v[mask]));
    }
  }

  ShapVector result;
  result.values = Eigen::VectorXd(n);
  for (int i = 0; i < n; ++i)
    result.values(i) = static_cast<double>(phi[static_cast<size_t>(i)]);
  result.base_value = v[0];
  result.instance = x;
  result.mode = ShapMode::kExact;
  return result;
}

ShapVector shap_sampled(const TrainedModel& m, const Instance& x,
                        const Dataset& background, int n_coalitions,
                        uint64_t rng_seed) {
  check_background(m, background);
  check_instance(m, x);
  const int n = static_cast<int>(m.schema().attribute_count());
  if (n > 62)
    throw ConfigError("sampled Shapley supports at most 62 attributes");
  if (n_coalitions < 2 * n + 2)
    throw ConfigError("n_coalitions must be at least 2n + 2 = " +
                      std::to_string(2 * n + 2));

  const double fx = m.predict_proba(x);
  const double base = base_value(m, background);

  ShapVector result;
  result.instance = x;
  result.mode = ShapMode::kSampled;
  result.base_value = base;

  if (n == 1) {
    // The single feature carries the whole deviation from the base.
    result.values = Eigen::VectorXd::Constant(1, fx - base);
    return result;
  }

  // Phase 1: enumerate whole coalition sizes while the budget allows,
  // assigning each mask its exact kernel weight
  //   pi(z) = (n-1) / (C(n,|z|) |z| (n-|z|)).
  std::map<uint64_t, double> weight_by_mask;
  long long remaining = n_coalitions;
  std::vector<int> incomplete;
  for (int s : size_ladder(n)) {
    const long double count = binomial(n, s);
    if (count <= static_cast<long double>(remaining)) {
      const double pi =
          static_cast<double>((n - 1) / (count * s * (n - s)));
      uint64_t mask = (1ull << s) - 1;
      const long long c = static_cast<long long>(count);
      for (long long i = 0; i < c; ++i) {
        weight_by_mask[mask] = pi;
        const uint64_t low = mask & (~mask + 1);
        const uint64_t ripple = mask + low;
        mask = (((mask ^ ripple) >> 2) / low) | ripple;
      }
      remaining -= c;
    } else {
      incomplete.push_back(s);
    }
  }

  // Phase 2: spend the leftover budget on the incomplete sizes, sampling
  // masks in proportion to the kernel mass each size carries. The sampled
  // block's total weight equals the leftover kernel mass, split by
  // observed frequency.
  if (!incomplete.empty() && remaining > 0) {
    double leftover_mass = 0.0;
    std::vector<double> cumulative;
    for (int s : incomplete) {
      leftover_mass += static_cast<double>(n - 1) /
                       (static_cast<double>(s) * (n - s));
      cumulative.push_back(leftover_mass);
    }
    Rng rng(derive_seed(rng_seed, "shap/coalitions", 0));
    std::map<uint64_t, long long> counts;
    std::vector<int> indices(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) indices[static_cast<size_t>(i)] = i;
    for (long long draw = 0; draw < remaining; ++draw) {
      const double u = rng.uniform_real() * leftover_mass;
      size_t pick = 0;
      while (pick + 1 < cumulative.size() && u >= cumulative[pick]) ++pick;
      const int s = incomplete[pick];
      rng.shuffle(indices);
      uint64_t mask = 0;
      for (int i = 0; i < s; ++i)
        mask |= 1ull << indices[static_cast<size_t>(i)];
      ++counts[mask];
    }
    for (const auto& [mask, count] : counts)
      weight_by_mask[mask] += static_cast<double>(count) * leftover_mass /
                              static_cast<double>(remaining);
  }

  // Evaluate v(z) for every retained mask. std::map iteration gives a
  // deterministic mask order (and adjacent masks share most bits).
  const Eigen::MatrixXd bg = scaled_rows(background.schema, background.rows);
  const Eigen::VectorXd xs = scaled_row(m.schema(), x);
  std::vector<uint64_t> masks;
  masks.reserve(weight_by_mask.size());
  std::vector<double> v(weight_by_mask.size());
  {
    CoalitionEvaluator eval(m, bg, xs);
    size_t slot = 0;
    for (const auto& [mask, w] : weight_by_mask) {
      masks.push_back(mask);
      eval.enqueue(mask, &v[slot++]);
    }
    eval.drain();
  }

  // Constrained weighted least squares. The intercept is pinned to the base
  // value and feature n-1 is eliminated through the additivity constraint
  //   sum(phi) = f(x) - base,
  // then recovered from it, so additivity holds by construction.
  const size_t rows = masks.size();
  Eigen::MatrixXd design(static_cast<Eigen::Index>(rows), n - 1);
  Eigen::VectorXd target(static_cast<Eigen::Index>(rows));
  for (size_t r = 0; r < rows; ++r) {
    const uint64_t mask = masks[r];
    const double z_last = (mask >> (n - 1)) & 1 ? 1.0 : 0.0;
    const double sqrt_w = std::sqrt(weight_by_mask.at(mask));
    for (int i = 0; i < n - 1; ++i)
      design(static_cast<Eigen::Index>(r), i) =
          sqrt_w * (((mask >> i & 1) ? 1.0 : 0.0) - z_last);
    target(static_cast<Eigen::Index>(r)) =
        sqrt_w * (v[r] - base - z_last * (fx - base));
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < n - 1)
    throw ComputeError(
        "sampled Shapley regression is singular; increase n_coalitions");
  Eigen::VectorXd head = qr.solve(target);

  result.values = Eigen::VectorXd(n);
  result.values.head(n - 1) = head;
  result.values(n - 1) = (fx - base) - head.sum();
  return result;
}

ShapVector shap_values(const TrainedModel& m, const Instance& x,
                       const Dataset& background, const ShapOptions& opts) {
  ShapMode mode;
  if (opts.mode.has_value()) {
    mode = *opts.mode;
  } else {
    mode = static_cast<int>(m.schema().attribute_count()) <=
                   kShapExactDefaultLimit
               ? ShapMode::kExact
               : ShapMode::kSampled;
  }
  if (mode == ShapMode::kExact) return shap_exact(m, x, background);
  return shap_sampled(m, x, background, opts.n_coalitions, opts.rng_seed);
}

Dataset make_background(const Dataset& train, int max_rows,
                        uint64_t rng_seed) {
  if (max_rows < 1) throw ConfigError("background size must be at least 1");
  if (train.rows.empty())
    throw DataError("cannot build a background from an empty dataset");
  if (static_cast<int>(train.size()) <= max_rows) return train;

  const Eigen::MatrixXd points = scaled_rows(train.schema, train.rows);
  Clustering clusters =
      kmeans(points, max_rows, derive_seed(rng_seed, "shap/background", 0));

  Dataset out;
  out.schema = train.schema;
  for (int c = 0; c < clusters.cluster_count; ++c) {
    int best = -1;
    double best_dist = 0.0;
    for (size_t i = 0; i < train.size(); ++i) {
      if (clusters.assignments[i] != c) continue;
      const double d =
          (points.row(static_cast<Eigen::Index>(i)) - clusters.centroids.row(c))
              .squaredNorm();
      if (best < 0 || d < best_dist) {
        best = static_cast<int>(i);
        best_dist = d;
      }
    }
    if (best >= 0) {
      out.rows.push_back(train.rows[static_cast<size_t>(best)]);
      out.labels.push_back(train.labels[static_cast<size_t>(best)]);
    }
  }
  return out;
}

}  // namespace fairlens
