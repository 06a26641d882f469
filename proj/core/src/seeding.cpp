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

#include "fairlens/seeding.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "fairlens/cluster.hpp"
#include "fairlens/discrimination.hpp"
#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"
#include "nlohmann/json.hpp"

namespace fairlens {

namespace {

using nlohmann::json;

void check_seed_inputs(const Dataset& ds, int budget) {
  if (ds.rows.empty()) throw DataError("cannot draw seeds from an empty dataset");
  if (budget < 1) throw ConfigError("seed budget must be at least 1");
}

// Appends to `set` every not-yet-seen instance from `order`, up to the
// budget. Returns how many were added.
int take_distinct(SeedSet* set, std::unordered_set<Instance, InstanceHash>* seen,
                  const Dataset& ds, const std::vector<size_t>& order,
                  bool idi_flag) {
  int added = 0;
  for (size_t idx : order) {
    if (static_cast<int>(set->seeds.size()) >= set->budget) break;
    const Instance& row = ds.rows[idx];
    if (!seen->insert(row).second) continue;
    set->seeds.push_back(row);
    set->idi_flags.push_back(idi_flag);
    ++added;
  }
  return added;
}

}  // namespace

std::string seed_strategy_name(SeedStrategy s) {
  switch (s) {
    case SeedStrategy::kRandom:
      return "random";
    case SeedStrategy::kCluster:
      return "cluster";
    case SeedStrategy::kIand:
      return "iand";
  }
  throw ConfigError("unknown seed strategy value");
}

SeedStrategy parse_seed_strategy(const std::string& name) {
  if (name == "random") return SeedStrategy::kRandom;
  if (name == "cluster") return SeedStrategy::kCluster;
  if (name == "iand") return SeedStrategy::kIand;
  throw ConfigError("unknown seed strategy '" + name + "'");
}

SeedSet seed_random(const Dataset& ds, int budget, uint64_t rng_seed) {
  check_seed_inputs(ds, budget);
  SeedSet set;
  set.strategy = SeedStrategy::kRandom;
  set.budget = budget;

  std::vector<size_t> order(ds.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(derive_seed(rng_seed, "seed/random"));
  rng.shuffle(order);

  std::unordered_set<Instance, InstanceHash> seen;
  take_distinct(&set, &seen, ds, order, /*idi_flag=*/false);
  return set;
}

SeedSet seed_cluster(const Dataset& ds, int budget, int k, uint64_t rng_seed) {
  check_seed_inputs(ds, budget);
  if (k < 1 || static_cast<size_t>(k) > ds.size())
    throw ConfigError("cluster count must be between 1 and the dataset size");

  Eigen::MatrixXd points = scaled_rows(ds.schema, ds.rows);
  Clustering clusters =
      kmeans(points, k, derive_seed(rng_seed, "seed/kmeans"));

  // Member row indices per cluster, shuffled with a per-cluster stream.
  std::vector<std::vector<size_t>> members(static_cast<size_t>(k));
  for (size_t i = 0; i < ds.size(); ++i)
    members[static_cast<size_t>(clusters.assignments[i])].push_back(i);
  for (int c = 0; c < k; ++c) {
    Rng rng(derive_seed(rng_seed, "seed/cluster-order",
                        static_cast<uint64_t>(c)));
    rng.shuffle(members[static_cast<size_t>(c)]);
  }

  // Visit clusters in descending size order (stable on cluster id).
  std::vector<int> visit(static_cast<size_t>(k));
  std::iota(visit.begin(), visit.end(), 0);
  std::sort(visit.begin(), visit.end(), [&](int a, int b) {
    const size_t sa = members[static_cast<size_t>(a)].size();
    const size_t sb = members[static_cast<size_t>(b)].size();
    if (sa != sb) return sa > sb;
    return a < b;
  });

  SeedSet set;
  set.strategy = SeedStrategy::kCluster;
  set.budget = budget;
  std::unordered_set<Instance, InstanceHash> seen;
  std::vector<size_t> cursor(static_cast<size_t>(k), 0);
  bool progressed = true;
  while (static_cast<int>(set.seeds.size()) < budget && progressed) {
    progressed = false;
    for (int c : visit) {
      if (static_cast<int>(set.seeds.size()) >= budget) break;
      auto& list = members[static_cast<size_t>(c)];
      size_t& pos = cursor[static_cast<size_t>(c)];
      while (pos < list.size()) {
        const Instance& row = ds.rows[list[pos]];
        ++pos;
        if (seen.insert(row).second) {
          set.seeds.push_back(row);
          set.idi_flags.push_back(false);
          progressed = true;
          break;
        }
      }
    }
  }
  return set;
}

TrainedModel build_chiral(const TrainedModel& original, const Dataset& ds,
                          uint64_t rng_seed) {
  if (original.schema_fingerprint() != ds.schema.fingerprint())
    throw DataError("chiral training data does not match the model's schema");
  Dataset mutated =
      mutate_protected(ds, derive_seed(rng_seed, "chiral/mutate"));
  return train(original.kind(), mutated, original.config(),
               derive_seed(rng_seed, "chiral/train"));
}

SeedSet seed_iand(const TrainedModel& original, const Dataset& ds, int budget,
                  const DbscanParams& dbscan_params,
                  const SeedShapConfig& shap_cfg, uint64_t rng_seed,
                  SeedIandDiagnostics* diagnostics) {
  check_seed_inputs(ds, budget);
  SeedIandDiagnostics diag;

  TrainedModel chiral = build_chiral(original, ds, rng_seed);

  // Label every row under both models in one batched pass each.
  const Eigen::MatrixXd scaled = scaled_rows(ds.schema, ds.rows);
  const Eigen::VectorXd p_orig = original.predict_proba_scaled(scaled);
  const Eigen::VectorXd p_chiral = chiral.predict_proba_scaled(scaled);

  // Confirm each disagreeing row against the original model with an
  // exhaustive witness search; survivors form the candidate pool.
  std::vector<std::string> protected_names;
  for (int p : ds.schema.protected_indices())
    protected_names.push_back(ds.schema.attributes[static_cast<size_t>(p)].name);
  const long long product = protected_names.empty()
                                ? 0
                                : witness_product_size(ds.schema,
                                                       protected_names);

  std::vector<Instance> pool;
  std::unordered_set<Instance, InstanceHash> pool_seen;
  for (size_t i = 0; i < ds.size(); ++i) {
    const int label_o = p_orig(static_cast<Eigen::Index>(i)) >= 0.5 ? 1 : 0;
    const int label_c = p_chiral(static_cast<Eigen::Index>(i)) >= 0.5 ? 1 : 0;
    if (label_o == label_c) continue;
    ++diag.disagreement_count;
    if (!pool_seen.insert(ds.rows[i]).second) continue;  // dedup by value
    if (product >= 1 &&
        check_idi(original, ds.rows[i], protected_names, product)) {
      pool.push_back(ds.rows[i]);
      ++diag.confirmed_idi_count;
    } else {
      ++diag.discarded_count;
    }
  }

  SeedSet set;
  set.strategy = SeedStrategy::kIand;
  set.budget = budget;
  std::unordered_set<Instance, InstanceHash> seen;

  if (!pool.empty()) {
    // Explain each candidate under the original model and cluster the
    // explanation vectors by density.
    Dataset background = make_background(
        ds, shap_cfg.background_rows, derive_seed(rng_seed, "seed/shap-bg"));
    const int n = static_cast<int>(ds.schema.attribute_count());
    Eigen::MatrixXd shap_points(static_cast<Eigen::Index>(pool.size()), n);
    for (size_t i = 0; i < pool.size(); ++i) {
      ShapOptions opts;
      opts.mode = shap_cfg.mode;
      opts.n_coalitions = shap_cfg.n_coalitions;
      opts.rng_seed = derive_seed(rng_seed, "seed/shap", i);
      ShapVector sv = shap_values(original, pool[i], background, opts);
      shap_points.row(static_cast<Eigen::Index>(i)) = sv.values.transpose();
    }

    Clustering clusters =
        dbscan(shap_points, dbscan_params.eps, dbscan_params.min_pts);
    diag.cluster_count = clusters.cluster_count;

    // Bucket candidates: real clusters first, noise as one final pseudo-
    // cluster so confirmed IDIs are never wasted.
    const int bucket_count = clusters.cluster_count + 1;
    std::vector<std::vector<size_t>> buckets(
        static_cast<size_t>(bucket_count));
    for (size_t i = 0; i < pool.size(); ++i) {
      const int a = clusters.assignments[i];
      const size_t bucket = a == Clustering::kNoise
                                ? static_cast<size_t>(clusters.cluster_count)
                                : static_cast<size_t>(a);
      buckets[bucket].push_back(i);
    }
    diag.noise_count =
        static_cast<int>(buckets[static_cast<size_t>(clusters.cluster_count)]
                             .size());
    for (int b = 0; b < bucket_count; ++b) {
      Rng rng(derive_seed(rng_seed, "seed/iand-order",
                          static_cast<uint64_t>(b)));
      rng.shuffle(buckets[static_cast<size_t>(b)]);
    }

    // Visit real clusters in descending size order, noise last.
    std::vector<int> visit(static_cast<size_t>(clusters.cluster_count));
    std::iota(visit.begin(), visit.end(), 0);
    std::sort(visit.begin(), visit.end(), [&](int a, int b) {
      const size_t sa = buckets[static_cast<size_t>(a)].size();
      const size_t sb = buckets[static_cast<size_t>(b)].size();
      if (sa != sb) return sa > sb;
      return a < b;
    });
    visit.push_back(clusters.cluster_count);

    std::vector<size_t> cursor(static_cast<size_t>(bucket_count), 0);
    bool progressed = true;
    while (static_cast<int>(set.seeds.size()) < budget && progressed) {
      progressed = false;
      for (int b : visit) {
        if (static_cast<int>(set.seeds.size()) >= budget) break;
        auto& list = buckets[static_cast<size_t>(b)];
        size_t& pos = cursor[static_cast<size_t>(b)];
        while (pos < list.size()) {
          const Instance& candidate = pool[list[pos]];
          ++pos;
          if (seen.insert(candidate).second) {
            set.seeds.push_back(candidate);
            set.idi_flags.push_back(true);
            progressed = true;
            break;
          }
        }
      }
    }
  }

  // Fill any shortfall with random rows from the dataset.
  if (static_cast<int>(set.seeds.size()) < budget) {
    std::vector<size_t> order(ds.size());
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(derive_seed(rng_seed, "seed/fill"));
    rng.shuffle(order);
    set.fill_count = take_distinct(&set, &seen, ds, order,
                                   /*idi_flag=*/false);
  }

  if (diagnostics != nullptr) *diagnostics = diag;
  return set;
}

std::string seedset_to_json(const SeedSet& set) {
  json j;
  j["budget"] = set.budget;
  j["fill_count"] = set.fill_count;
  j["idi_flags"] = std::vector<int>(set.idi_flags.begin(),
                                    set.idi_flags.end());
  json seeds = json::array();
  for (const Instance& s : set.seeds) seeds.push_back(s.values);
  j["seeds"] = std::move(seeds);
  j["strategy"] = seed_strategy_name(set.strategy);
  return j.dump(2) + "\n";
}

SeedSet seedset_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    SeedSet set;
    set.budget = j.at("budget").get<int>();
    set.fill_count = j.at("fill_count").get<int>();
    set.strategy = parse_seed_strategy(j.at("strategy").get<std::string>());
    for (const auto& row : j.at("seeds"))
      set.seeds.push_back(Instance(row.get<std::vector<int>>()));
    for (int f : j.at("idi_flags").get<std::vector<int>>())
      set.idi_flags.push_back(f != 0);
    if (set.idi_flags.size() != set.seeds.size())
      throw DataError("seed set: flag count does not match seed count");
    return set;
  } catch (const json::exception& e) {
    throw DataError(std::string("seed set file is malformed: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("seed set file is malformed: ") + e.what());
  }
}

void save_seedset(const SeedSet& set, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write seed set file '" + path + "'");
  out << seedset_to_json(set);
  if (!out) throw DataError("failed writing seed set file '" + path + "'");
}

SeedSet load_seedset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open seed set file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return seedset_from_json(buffer.str());
}

}  // namespace fairlens
