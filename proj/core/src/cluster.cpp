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

#include "fairlens/cluster.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"

namespace fairlens {
namespace {

constexpr int kUnvisited = -2;

std::vector<int> region_query(const Eigen::MatrixXd& points, int i,
                              double eps_sq) {
  std::vector<int> out;
  const auto row = points.row(i);
  for (int j = 0; j < points.rows(); ++j) {
    if ((points.row(j) - row).squaredNorm() <= eps_sq) out.push_back(j);
  }
  return out;
}

}  // namespace

int Clustering::cluster_size(int c) const {
  return static_cast<int>(std::count(assignments.begin(), assignments.end(), c));
}

Clustering dbscan(const Eigen::MatrixXd& points, double eps, int min_pts) {
  if (eps <= 0) throw ConfigError("dbscan: eps must be positive");
  if (min_pts < 1) throw ConfigError("dbscan: min_pts must be at least 1");

  const int n = static_cast<int>(points.rows());
  const double eps_sq = eps * eps;
  Clustering result;
  result.assignments.assign(static_cast<size_t>(n), kUnvisited);
  auto& labels = result.assignments;

  int cid = 0;
  for (int i = 0; i < n; ++i) {
    if (labels[static_cast<size_t>(i)] != kUnvisited) continue;
    std::vector<int> neighbors = region_query(points, i, eps_sq);
    if (static_cast<int>(neighbors.size()) < min_pts) {
      labels[static_cast<size_t>(i)] = Clustering::kNoise;
      continue;
    }
    labels[static_cast<size_t>(i)] = cid;
    // Breadth-first cluster expansion over the seed list.
    std::vector<int> frontier = std::move(neighbors);
    for (size_t f = 0; f < frontier.size(); ++f) {
      const int j = frontier[f];
      int& lj = labels[static_cast<size_t>(j)];
      if (lj == Clustering::kNoise) lj = cid;  // border point, was noise
      if (lj != kUnvisited) continue;
      lj = cid;
      std::vector<int> nj = region_query(points, j, eps_sq);
      if (static_cast<int>(nj.size()) >= min_pts)
        frontier.insert(frontier.end(), nj.begin(), nj.end());
    }
    ++cid;
  }
  result.cluster_count = cid;
  return result;
}

Clustering kmeans(const Eigen::MatrixXd& points, int k, uint64_t rng_seed,
                  int max_iters) {
  const int n = static_cast<int>(points.rows());
  const int dim = static_cast<int>(points.cols());
  if (k < 1 || k > n)
    throw ConfigError("kmeans: k must satisfy 1 <= k <= point count");

  Rng rng(rng_seed);

  // k-means++ seeding: first centroid uniform, the rest proportional to the
  // squared distance to the nearest chosen centroid.
  Eigen::MatrixXd centroids(k, dim);
  centroids.row(0) =
      points.row(static_cast<int>(rng.uniform_int(static_cast<uint64_t>(n))));
  Eigen::VectorXd dist_sq(n);
  for (int i = 0; i < n; ++i)
    dist_sq(i) = (points.row(i) - centroids.row(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = dist_sq.sum();
    int pick = 0;
    if (total > 0) {
      double target = rng.uniform_real() * total;
      double acc = 0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += dist_sq(i);
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      // All remaining points coincide with chosen centroids.
      pick = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(n)));
    }
    centroids.row(c) = points.row(pick);
    for (int i = 0; i < n; ++i)
      dist_sq(i) = std::min(dist_sq(i),
                            (points.row(i) - centroids.row(c)).squaredNorm());
  }

  Clustering result;
  result.cluster_count = k;
  result.assignments.assign(static_cast<size_t>(n), 0);
  std::vector<double> point_dist(static_cast<size_t>(n), 0.0);

  auto assign = [&]() {
    double inertia = 0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (points.row(i) - centroids.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      result.assignments[static_cast<size_t>(i)] = best;
      point_dist[static_cast<size_t>(i)] = best_d;
      inertia += best_d;
    }
    return inertia;
  };

  result.inertia_log.push_back(assign());
  for (int iter = 0; iter < max_iters; ++iter) {
    // Recompute centroids; an empty cluster is reseeded to the point
    // farthest from its current centroid (lowest index on ties).
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, dim);
    std::vector<int> counts(static_cast<size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      const int c = result.assignments[static_cast<size_t>(i)];
      sums.row(c) += points.row(i);
      counts[static_cast<size_t>(c)]++;
    }
    Eigen::MatrixXd next(k, dim);
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<size_t>(c)] > 0) {
        next.row(c) = sums.row(c) / counts[static_cast<size_t>(c)];
      } else {
        int far = 0;
        double far_d = -1;
        for (int i = 0; i < n; ++i) {
          if (point_dist[static_cast<size_t>(i)] > far_d) {
            far_d = point_dist[static_cast<size_t>(i)];
            far = i;
          }
        }
        next.row(c) = points.row(far);
        point_dist[static_cast<size_t>(far)] = 0;  // claimed by this cluster
      }
    }
    const double movement = (next - centroids).rowwise().norm().maxCoeff();
    centroids = next;
    result.inertia_log.push_back(assign());
    if (movement < 1e-6) break;
  }
  result.centroids = centroids;
  return result;
}

}  // namespace fairlens
