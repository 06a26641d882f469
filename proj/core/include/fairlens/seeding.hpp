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

#ifndef FAIRLENS_SEEDING_HPP_
#define FAIRLENS_SEEDING_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fairlens/dataset.hpp"
#include "fairlens/model.hpp"
#include "fairlens/shap.hpp"

namespace fairlens {

enum class SeedStrategy { kRandom, kCluster, kIand };

std::string seed_strategy_name(SeedStrategy s);
SeedStrategy parse_seed_strategy(const std::string& name);  // ConfigError

// An ordered batch of starting instances for the generation engines.
struct SeedSet {
  std::vector<Instance> seeds;  // distinct, at most `budget` of them
  SeedStrategy strategy = SeedStrategy::kRandom;
  int budget = 0;
  // Whether each seed was a confirmed discriminatory instance at selection
  // time (only the iand strategy establishes this).
  std::vector<bool> idi_flags;
  // How many trailing seeds came from the random fill-up phase.
  int fill_count = 0;
};

inline constexpr double kDefaultDbscanEps = 0.09;
inline constexpr int kDefaultDbscanMinPts = 10;
inline constexpr int kDefaultClusterK = 4;

struct DbscanParams {
  double eps = kDefaultDbscanEps;
  int min_pts = kDefaultDbscanMinPts;

  bool operator==(const DbscanParams&) const = default;
};

// Shapley configuration for the diversity step. The sampled estimator is
// the default: the pipeline explains hundreds of candidates and needs each
// explanation cheap, not exact.
struct SeedShapConfig {
  ShapMode mode = ShapMode::kSampled;
  int n_coalitions = 128;    // sampled mode only
  int background_rows = 32;  // medoid background size

  bool operator==(const SeedShapConfig&) const = default;
};

// Optional visibility into the iand pipeline's intermediate stages.
struct SeedIandDiagnostics {
  int disagreement_count = 0;  // rows the two models label differently
  int confirmed_idi_count = 0;  // disagreeing rows that pass the oracle
  int discarded_count = 0;      // disagreeing rows that fail it
  int cluster_count = 0;        // DBSCAN clusters over Shapley vectors
  int noise_count = 0;          // DBSCAN noise candidates
};

// Uniform sampling without replacement (deduplicated by value); with budget
// >= |ds| every distinct row is returned.
SeedSet seed_random(const Dataset& ds, int budget, uint64_t rng_seed);

// k-means the scaled rows, then draw seeds round-robin across clusters in
// descending size order, shuffled within each cluster.
SeedSet seed_cluster(const Dataset& ds, int budget, int k = kDefaultClusterK,
                     uint64_t rng_seed = 0);

// Trains the mirror-image model: same kind and hyperparameters, fit to a
// copy of ds whose protected attributes have been randomly mutated.
TrainedModel build_chiral(const TrainedModel& original, const Dataset& ds,
                          uint64_t rng_seed);

// The full initialization pipeline: build the chiral model, collect rows
// the two models label differently, keep those the discrimination oracle
// confirms against the original model, explain each survivor with Shapley
// values, DBSCAN-cluster the explanations, and pick seeds round-robin
// across clusters (noise last). A short pool is topped up by random rows
// from ds, recorded in fill_count.
SeedSet seed_iand(const TrainedModel& original, const Dataset& ds, int budget,
                  const DbscanParams& dbscan_params = {},
                  const SeedShapConfig& shap_cfg = {}, uint64_t rng_seed = 0,
                  SeedIandDiagnostics* diagnostics = nullptr);

// JSON (de)serialization for seed sets.
std::string seedset_to_json(const SeedSet& set);
SeedSet seedset_from_json(const std::string& text);  // DataError
void save_seedset(const SeedSet& set, const std::string& path);
SeedSet load_seedset(const std::string& path);

}  // namespace fairlens

#endif  // FAIRLENS_SEEDING_HPP_
