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

#include "fairlens/evalharness.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>
#include <utility>

#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"
#include "fairlens/seeding.hpp"
#include "nlohmann/json.hpp"

namespace fairlens {
namespace {

using nlohmann::json;

constexpr double kTrainFraction = 0.6;

std::string arm_phase(const std::string& what,
                      const CompareConfigEntry& config) {
  return "eval/" + what + "/" + seed_strategy_name(config.strategy) + "-" +
         std::string(engine_name(config.engine));
}

SeedSet make_seeds(const CompareConfigEntry& config, const TrainedModel& m,
                   const Dataset& ds, int budget, uint64_t seed) {
  switch (config.strategy) {
    case SeedStrategy::kRandom:
      return seed_random(ds, budget, seed);
    case SeedStrategy::kCluster:
      return seed_cluster(ds, budget, kDefaultClusterK, seed);
    case SeedStrategy::kIand:
      return seed_iand(m, ds, budget, {}, {}, seed);
  }
  throw ConfigError("unknown seeding strategy");
}

}  // namespace

Dataset label_idis(const std::vector<IdiRecord>& idis,
                   const std::vector<const TrainedModel*>& oracle_models,
                   const TrainedModel& tiebreak) {
  Dataset out;
  if (idis.empty()) {
    out.schema = tiebreak.schema();
    return out;
  }
  out.schema = tiebreak.schema();
  out.rows.reserve(idis.size());
  out.labels.reserve(idis.size());
  for (const IdiRecord& rec : idis) {
    out.rows.push_back(rec.instance);
    out.labels.push_back(
        majority_vote_label(oracle_models, rec.instance, tiebreak));
  }
  return out;
}

TrainedModel retrain(const TrainedModel& m, const Dataset& train,
                     const Dataset& labeled_idis, int epochs,
                     uint64_t rng_seed, bool from_scratch) {
  if (epochs < 0) throw ConfigError("retraining epochs must not be negative");
  if (train.schema.fingerprint() != m.schema_fingerprint())
    throw DataError("training data does not match the model schema");
  if (!labeled_idis.rows.empty() &&
      labeled_idis.schema.fingerprint() != m.schema_fingerprint())
    throw DataError("labeled instances do not match the model schema");

  Dataset augmented = train;
  augmented.rows.insert(augmented.rows.end(), labeled_idis.rows.begin(),
                        labeled_idis.rows.end());
  augmented.labels.insert(augmented.labels.end(), labeled_idis.labels.begin(),
                          labeled_idis.labels.end());
  if (from_scratch) return fairlens::train(m.kind(), augmented, m.config(), rng_seed);
  return continue_training(m, augmented, epochs, rng_seed);
}

long long measure_remaining(const TrainedModel& m,
                            const std::vector<Instance>& test_cases,
                            const std::vector<std::string>& protected_attrs) {
  const long long cap =
      witness_product_size(m.schema(), protected_attrs);
  std::unordered_set<Instance, InstanceHash> seen;
  long long remaining = 0;
  for (const Instance& x : test_cases) {
    if (!seen.insert(x).second) continue;
    if (check_idi(m, x, protected_attrs, std::max<long long>(cap, 1))
            .has_value())
      ++remaining;
  }
  return remaining;
}

HeadToHeadResult head_to_head(const CompareConfigEntry& config_a,
                              const CompareConfigEntry& config_b,
                              const Dataset& ds,
                              const std::vector<std::string>& protected_attrs,
                              const GenBudget& budget, uint64_t rng_seed,
                              ModelKind kind, const TrainConfig& train_cfg,
                              int retrain_epochs, bool from_scratch) {
  validate_budget(budget);
  auto [train_split, test_split] =
      split(ds, kTrainFraction, derive_seed(rng_seed, "eval/split"));

  TrainedModel original =
      train(kind, train_split, train_cfg, derive_seed(rng_seed, "eval/train"));

  // Majority-vote oracles: one model of each kind on the training split.
  const ModelKind kinds[] = {ModelKind::kLogistic, ModelKind::kSvm,
                             ModelKind::kTree, ModelKind::kMlp};
  std::vector<TrainedModel> oracles;
  oracles.reserve(4);
  for (int k = 0; k < 4; ++k)
    oracles.push_back(train(kinds[k], train_split, train_cfg,
                            derive_seed(rng_seed, "eval/oracle",
                                        static_cast<uint64_t>(k))));
  std::vector<const TrainedModel*> oracle_ptrs;
  for (const TrainedModel& o : oracles) oracle_ptrs.push_back(&o);

  // Arms derive their streams from the configuration content, so identical
  // configurations reproduce each other exactly.
  const CompareConfigEntry* configs[2] = {&config_a, &config_b};
  GenResult results[2] = {{}, {}};
  for (int arm = 0; arm < 2; ++arm) {
    const CompareConfigEntry& cfg = *configs[arm];
    SeedSet seeds =
        make_seeds(cfg, original, train_split, budget.seed_limit,
                   derive_seed(rng_seed, arm_phase("seeds", cfg)));
    results[arm] = generate(cfg.engine, original, seeds, protected_attrs,
                            budget, derive_seed(rng_seed, arm_phase("gen", cfg)));
  }

  // Shared yardstick: first-seen deduplicated union of both discovery sets.
  std::vector<Instance> test_cases;
  std::unordered_set<Instance, InstanceHash> seen;
  for (const GenResult& r : results)
    for (const IdiRecord& rec : r.idis)
      if (seen.insert(rec.instance).second) test_cases.push_back(rec.instance);

  const long long remaining_before =
      measure_remaining(original, test_cases, protected_attrs);
  const double f1_before = f1_score(original, test_split);

  auto build_arm = [&](const GenResult& gen,
                       const CompareConfigEntry& cfg) -> RetrainOutcome {
    Dataset labeled = label_idis(gen.idis, oracle_ptrs, original);
    TrainedModel retrained =
        retrain(original, train_split, labeled, retrain_epochs,
                derive_seed(rng_seed, arm_phase("retrain", cfg)), from_scratch);
    RetrainOutcome outcome{std::move(retrained), test_cases, remaining_before,
                           0, f1_before, 0.0};
    outcome.remaining_after =
        measure_remaining(outcome.retrained, test_cases, protected_attrs);
    outcome.f1_after = f1_score(outcome.retrained, test_split);
    return outcome;
  };

  return HeadToHeadResult{build_arm(results[0], config_a),
                          build_arm(results[1], config_b)};
}

std::string head_to_head_to_json(const HeadToHeadResult& result,
                                 const CompareConfigEntry& config_a,
                                 const CompareConfigEntry& config_b) {
  auto arm = [](const RetrainOutcome& o, const CompareConfigEntry& cfg) {
    return json{{"strategy", seed_strategy_name(cfg.strategy)},
                {"engine", std::string(engine_name(cfg.engine))},
                {"remaining_before", o.remaining_before},
                {"remaining_after", o.remaining_after},
                {"f1_before", o.f1_before},
                {"f1_after", o.f1_after}};
  };
  json doc{{"test_cases", result.arm_a.test_cases.size()},
           {"arm_a", arm(result.arm_a, config_a)},
           {"arm_b", arm(result.arm_b, config_b)}};
  return doc.dump(2) + "\n";
}

std::string head_to_head_csv_header() {
  return "label,config_a,config_b,test_cases,remaining_before,"
         "remaining_after_a,remaining_after_b,f1_before,f1_after_a,"
         "f1_after_b\n";
}

std::string head_to_head_csv_row(const HeadToHeadResult& result,
                                 const CompareConfigEntry& config_a,
                                 const CompareConfigEntry& config_b,
                                 const std::string& label) {
  char buf[256];
  auto name = [](const CompareConfigEntry& c) {
    return seed_strategy_name(c.strategy) + "+" +
           std::string(engine_name(c.engine));
  };
  std::snprintf(buf, sizeof(buf), "%s,%s,%s,%zu,%lld,%lld,%lld,%.4f,%.4f,%.4f\n",
                label.c_str(), name(config_a).c_str(), name(config_b).c_str(),
                result.arm_a.test_cases.size(), result.arm_a.remaining_before,
                result.arm_a.remaining_after, result.arm_b.remaining_after,
                result.arm_a.f1_before, result.arm_a.f1_after,
                result.arm_b.f1_after);
  return buf;
}

}  // namespace fairlens
