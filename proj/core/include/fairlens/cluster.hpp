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

#ifndef FAIRLENS_CLUSTER_HPP_
#define FAIRLENS_CLUSTER_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace fairlens {

// Result of a clustering run over the rows of a point matrix.
struct Clustering {
  static constexpr int kNoise = -1;  // DBSCAN only; k-means never emits it

  std::vector<int> assignments;  // one entry per point: cluster id or kNoise
  int cluster_count = 0;

  // k-means only: final centroids (cluster_count x dim) and the inertia
  // (sum of squared point-to-centroid distances) after each Lloyd
  // iteration, including the initial assignment.
  Eigen::MatrixXd centroids;
  std::vector<double> inertia_log;

  // Number of points assigned to cluster `c`.
  int cluster_size(int c) const;
};

// Classical DBSCAN over the rows of `points` with Euclidean distance.
// Neighborhoods use `dist <= eps` and include the point itself, so a point
// is core when at least `min_pts` points (itself included) lie within eps.
// Cluster ids follow discovery order, which makes the result deterministic
// for a fixed input order; border points reachable from several clusters
// join the first cluster that reaches them.
Clustering dbscan(const Eigen::MatrixXd& points, double eps, int min_pts);

// Lloyd's algorithm with k-means++ seeding. Runs until centroids move less
// than 1e-6 or `max_iters` iterations; empty clusters are reseeded to the
// point currently farthest from its centroid. Deterministic given rng_seed.
Clustering kmeans(const Eigen::MatrixXd& points, int k, uint64_t rng_seed,
                  int max_iters = 100);

}  // namespace fairlens

#endif  // FAIRLENS_CLUSTER_HPP_
