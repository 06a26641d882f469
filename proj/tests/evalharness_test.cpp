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
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fairlens/dataset.hpp"
#include "fairlens/discrimination.hpp"
#include "fairlens/error.hpp"
#include "fairlens/model.hpp"
#include "fairlens/model_io.hpp"
#include "fairlens/rng.hpp"
#include "fairlens/seeding.hpp"
#include "fairlens/synth.hpp"
#include "gtest/gtest.h"

namespace fairlens {
namespace {

Dataset BiasedSynth(uint64_t seed, int rows = 700, int protected_count = 1) {
  SynthSpec spec;
  spec.attrs = 6;
  spec.rows = rows;
  spec.domain_size = 6;
  spec.protected_count = protected_count;
  spec.bias = 0.8;
  spec.noise = 0.02;
  spec.seed = seed;
  return synth_dataset(spec);
}

std::vector<std::string> ProtectedNames(const DatasetSchema& schema) {
  std::vector<std::string> names;
  for (int p : schema.protected_indices())
    names.push_back(schema.attributes[static_cast<size_t>(p)].name);
  return names;
}

// A model that predicts the same label everywhere.
TrainedModel ConstantLogistic(const DatasetSchema& schema, double b = 10.0) {
  LinearParams params;
  params.w = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(schema.attribute_count()));
  params.b = b;
  return TrainedModel(ModelKind::kLogistic, schema, TrainConfig{}, params);
}

std::vector<IdiRecord> RecordsFromRows(const Dataset& ds, size_t count) {
  std::vector<IdiRecord> records;
  for (size_t i = 0; i < count && i < ds.size(); ++i) {
    IdiRecord rec;
    rec.instance = ds.rows[i];
    records.push_back(rec);
  }
  return records;
}

struct OracleSet {
  std::vector<TrainedModel> models;
  std::vector<const TrainedModel*> ptrs;
};

OracleSet TrainOracles(const Dataset& ds, uint64_t base_seed) {
  const ModelKind kinds[] = {ModelKind::kLogistic, ModelKind::kSvm,
                             ModelKind::kTree, ModelKind::kMlp};
  OracleSet set;
  set.models.reserve(4);
  for (int k = 0; k < 4; ++k)
    set.models.push_back(
        train(kinds[k], ds, {}, base_seed + static_cast<uint64_t>(k)));
  for (const TrainedModel& m : set.models) set.ptrs.push_back(&m);
  return set;
}

// ---------------------------------------------------------------------------
// label_idis

TEST(LabelIdisTest, EmptyInputProducesEmptyDataset) {
  Dataset ds = BiasedSynth(3, 200);
  TrainedModel m = ConstantLogistic(ds.schema);
  Dataset out = label_idis({}, {&m, &m, &m, &m}, m);
  EXPECT_TRUE(out.rows.empty());
  EXPECT_TRUE(out.labels.empty());
  EXPECT_EQ(out.schema.fingerprint(), ds.schema.fingerprint());
}

TEST(LabelIdisTest, UnanimousConstantOraclesDictateTheLabel) {
  Dataset ds = BiasedSynth(3, 200);
  TrainedModel ones = ConstantLogistic(ds.schema, 10.0);
  TrainedModel zeros = ConstantLogistic(ds.schema, -10.0);
  std::vector<IdiRecord> records = RecordsFromRows(ds, 25);

  Dataset all_one = label_idis(records, {&ones, &ones, &ones, &ones}, zeros);
  ASSERT_EQ(all_one.rows.size(), records.size());
  for (size_t i = 0; i < all_one.rows.size(); ++i) {
    EXPECT_EQ(all_one.rows[i], records[i].instance);
    EXPECT_EQ(all_one.labels[i], 1);
  }

  // The tiebreak model must not override a 4-0 vote.
  Dataset all_zero = label_idis(records, {&zeros, &zeros, &zeros, &zeros}, ones);
  for (int label : all_zero.labels) EXPECT_EQ(label, 0);
}

TEST(LabelIdisTest, MatchesManualVoteRecount) {
  Dataset ds = BiasedSynth(7, 600);
  OracleSet oracles = TrainOracles(ds, 40);
  TrainedModel tiebreak = train(ModelKind::kTree, ds, {}, 99);
  std::vector<IdiRecord> records = RecordsFromRows(ds, 120);

  Dataset labeled = label_idis(records, oracles.ptrs, tiebreak);
  ASSERT_EQ(labeled.rows.size(), records.size());

  int tie_count = 0;
  for (size_t i = 0; i < records.size(); ++i) {
    int ones = 0;
    for (const TrainedModel* m : oracles.ptrs)
      ones += m->predict(records[i].instance);
    int expected;
    if (ones >= 3) {
      expected = 1;
    } else if (ones <= 1) {
      expected = 0;
    } else {
      expected = tiebreak.predict(records[i].instance);
      ++tie_count;
    }
    EXPECT_EQ(labeled.labels[i], expected) << "row " << i;
  }
  // The recount should exercise both clear majorities and (usually) a tie.
  EXPECT_GT(records.size(), 0u);
  SUCCEED() << "ties seen: " << tie_count;
}

TEST(LabelIdisTest, RejectsWrongOracleCount) {
  Dataset ds = BiasedSynth(3, 100);
  TrainedModel m = ConstantLogistic(ds.schema);
  std::vector<IdiRecord> records = RecordsFromRows(ds, 2);
  EXPECT_THROW(label_idis(records, {&m, &m, &m}, m), ConfigError);
  EXPECT_THROW(label_idis(records, {&m, &m, &m, &m, &m}, m), ConfigError);
}

// ---------------------------------------------------------------------------
// retrain

TEST(RetrainTest, ZeroEpochsReturnsTheModelUnchanged) {
  Dataset ds = BiasedSynth(5, 400);
  Dataset empty_labeled;
  empty_labeled.schema = ds.schema;
  for (ModelKind kind : {ModelKind::kMlp, ModelKind::kTree}) {
    TrainedModel m = train(kind, ds, {}, 11);
    TrainedModel r = retrain(m, ds, empty_labeled, 0, 77);
    EXPECT_EQ(model_to_json(r), model_to_json(m));
  }
}

TEST(RetrainTest, RejectsBadInputs) {
  Dataset ds = BiasedSynth(5, 300);
  Dataset other = BiasedSynth(5, 300, 2);  // different protected flags
  TrainedModel m = train(ModelKind::kLogistic, ds, {}, 11);

  Dataset empty_labeled;
  empty_labeled.schema = ds.schema;
  EXPECT_THROW(retrain(m, ds, empty_labeled, -1), ConfigError);
  EXPECT_THROW(retrain(m, other, empty_labeled, 5), DataError);

  Dataset bad_labeled;
  bad_labeled.schema = other.schema;
  bad_labeled.rows.push_back(other.rows[0]);
  bad_labeled.labels.push_back(0);
  EXPECT_THROW(retrain(m, ds, bad_labeled, 5), DataError);
}

TEST(RetrainTest, KeepsKindConfigAndSchema) {
  Dataset ds = BiasedSynth(9, 500);
  TrainConfig cfg;
  cfg.mlp.layer_widths = {12, 1};
  TrainedModel m = train(ModelKind::kMlp, ds, cfg, 11);

  Dataset labeled;
  labeled.schema = ds.schema;
  for (size_t i = 0; i < 30; ++i) {
    labeled.rows.push_back(ds.rows[i]);
    labeled.labels.push_back(1 - ds.labels[i]);
  }
  TrainedModel r = retrain(m, ds, labeled, 3, 77);
  EXPECT_EQ(r.kind(), m.kind());
  EXPECT_EQ(r.schema_fingerprint(), m.schema_fingerprint());
  EXPECT_EQ(r.config().mlp.layer_widths, cfg.mlp.layer_widths);
  // Three extra epochs on deliberately flipped labels must move the weights.
  EXPECT_NE(model_to_json(r), model_to_json(m));
}

TEST(RetrainTest, FromScratchMatchesDirectTraining) {
  Dataset ds = BiasedSynth(9, 400);
  TrainedModel m = train(ModelKind::kMlp, ds, {}, 11);

  Dataset labeled;
  labeled.schema = ds.schema;
  for (size_t i = 0; i < 20; ++i) {
    labeled.rows.push_back(ds.rows[i]);
    labeled.labels.push_back(ds.labels[i]);
  }
  Dataset augmented = ds;
  augmented.rows.insert(augmented.rows.end(), labeled.rows.begin(),
                        labeled.rows.end());
  augmented.labels.insert(augmented.labels.end(), labeled.labels.begin(),
                          labeled.labels.end());

  TrainedModel viaRetrain = retrain(m, ds, labeled, 10, 123, true);
  TrainedModel direct = train(ModelKind::kMlp, augmented, m.config(), 123);
  EXPECT_EQ(model_to_json(viaRetrain), model_to_json(direct));
}

// ---------------------------------------------------------------------------
// measure_remaining

TEST(MeasureRemainingTest, ConstantModelHasNoRemainingIdis) {
  Dataset ds = BiasedSynth(13, 300);
  TrainedModel m = ConstantLogistic(ds.schema);
  std::vector<Instance> cases(ds.rows.begin(), ds.rows.begin() + 50);
  EXPECT_EQ(measure_remaining(m, cases, ProtectedNames(ds.schema)), 0);
  EXPECT_EQ(measure_remaining(m, {}, ProtectedNames(ds.schema)), 0);
}

TEST(MeasureRemainingTest, MatchesBruteForceOverOneProtectedAttribute) {
  Dataset ds = BiasedSynth(14, 600);
  TrainedModel m = train(ModelKind::kTree, ds, {}, 21);
  const std::vector<int> prot = ds.schema.protected_indices();
  ASSERT_EQ(prot.size(), 1u);
  const auto p = static_cast<size_t>(prot[0]);

  std::vector<Instance> cases(ds.rows.begin(), ds.rows.begin() + 80);
  // Duplicate a third of the cases: duplicates must count once.
  for (size_t i = 0; i < 26; ++i) cases.push_back(cases[i]);

  long long expected = 0;
  std::set<Instance> unique(ds.rows.begin(), ds.rows.begin() + 80);
  for (const Instance& x : unique) {
    const int base = m.predict(x);
    bool idi = false;
    for (int v : ds.schema.attributes[p].domain) {
      if (v == x[p]) continue;
      Instance y = x;
      y.values[p] = v;
      if (m.predict(y) != base) {
        idi = true;
        break;
      }
    }
    expected += idi;
  }

  EXPECT_EQ(measure_remaining(m, cases, ProtectedNames(ds.schema)), expected);
  EXPECT_GT(expected, 0);
}

TEST(MeasureRemainingTest, MatchesBruteForceOverTwoProtectedAttributes) {
  Dataset ds = BiasedSynth(15, 500, 2);
  TrainedModel m = train(ModelKind::kTree, ds, {}, 22);
  const std::vector<int> prot = ds.schema.protected_indices();
  ASSERT_EQ(prot.size(), 2u);
  const auto p0 = static_cast<size_t>(prot[0]);
  const auto p1 = static_cast<size_t>(prot[1]);

  std::vector<Instance> cases(ds.rows.begin(), ds.rows.begin() + 60);
  long long expected = 0;
  std::set<Instance> unique(cases.begin(), cases.end());
  for (const Instance& x : unique) {
    const int base = m.predict(x);
    bool idi = false;
    for (int v0 : ds.schema.attributes[p0].domain) {
      for (int v1 : ds.schema.attributes[p1].domain) {
        if (v0 == x[p0] && v1 == x[p1]) continue;
        Instance y = x;
        y.values[p0] = v0;
        y.values[p1] = v1;
        if (m.predict(y) != base) idi = true;
      }
    }
    expected += idi;
  }

  EXPECT_EQ(measure_remaining(m, cases, ProtectedNames(ds.schema)), expected);
}

TEST(MeasureRemainingTest, RejectsUnknownProtectedAttribute) {
  Dataset ds = BiasedSynth(13, 100);
  TrainedModel m = ConstantLogistic(ds.schema);
  std::vector<Instance> cases = {ds.rows[0]};
  EXPECT_THROW(measure_remaining(m, cases, {"no_such_attribute"}), ConfigError);
  EXPECT_THROW(measure_remaining(m, cases, {}), ConfigError);
}

// ---------------------------------------------------------------------------
// retraining reduces discrimination on a planted-bias dataset

TEST(RetrainTest, ReducesRemainingIdisOnPlantedBias) {
  Dataset ds = BiasedSynth(14, 800);
  const std::vector<std::string> prot = ProtectedNames(ds.schema);
  TrainedModel m = train(ModelKind::kMlp, ds, {}, 5);

  SeedSet seeds = seed_random(ds, 40, 9);
  GenResult gen =
      generate(GenEngine::kAequitas, m, seeds, prot, {40, 40, 15}, 9);
  ASSERT_GT(gen.idis.size(), 10u);

  OracleSet oracles = TrainOracles(ds, 100);
  Dataset labeled = label_idis(gen.idis, oracles.ptrs, m);
  TrainedModel retrained = retrain(m, ds, labeled, 5, 3);

  std::vector<Instance> cases;
  for (const IdiRecord& rec : gen.idis) cases.push_back(rec.instance);
  const long long before = measure_remaining(m, cases, prot);
  const long long after = measure_remaining(retrained, cases, prot);
  EXPECT_EQ(before, static_cast<long long>(gen.idis.size()));
  EXPECT_LT(after, before);
}

// ---------------------------------------------------------------------------
// head_to_head

TEST(HeadToHeadTest, IdenticalConfigsProduceIdenticalArms) {
  Dataset ds = BiasedSynth(21, 600);
  const CompareConfigEntry cfg{SeedStrategy::kRandom, GenEngine::kAequitas};
  HeadToHeadResult r =
      head_to_head(cfg, cfg, ds, ProtectedNames(ds.schema), {25, 25, 8}, 17);

  EXPECT_EQ(r.arm_a.test_cases, r.arm_b.test_cases);
  EXPECT_EQ(r.arm_a.remaining_before, r.arm_b.remaining_before);
  EXPECT_EQ(r.arm_a.remaining_after, r.arm_b.remaining_after);
  EXPECT_EQ(r.arm_a.f1_before, r.arm_b.f1_before);
  EXPECT_EQ(r.arm_a.f1_after, r.arm_b.f1_after);
  EXPECT_EQ(model_to_json(r.arm_a.retrained), model_to_json(r.arm_b.retrained));
}

TEST(HeadToHeadTest, ArmsShareTheYardstickAndStayAccurate) {
  Dataset ds = BiasedSynth(33, 700);
  HeadToHeadResult r = head_to_head(
      {SeedStrategy::kRandom, GenEngine::kAequitas},
      {SeedStrategy::kCluster, GenEngine::kAequitas}, ds,
      ProtectedNames(ds.schema), {30, 30, 10}, 17);

  // Both arms are measured against the same deduplicated union.
  EXPECT_EQ(r.arm_a.test_cases, r.arm_b.test_cases);
  EXPECT_EQ(r.arm_a.remaining_before, r.arm_b.remaining_before);
  EXPECT_EQ(r.arm_a.f1_before, r.arm_b.f1_before);
  std::set<Instance> unique(r.arm_a.test_cases.begin(),
                            r.arm_a.test_cases.end());
  EXPECT_EQ(unique.size(), r.arm_a.test_cases.size());
  ASSERT_GT(r.arm_a.test_cases.size(), 0u);

  // Every pooled test case was a confirmed IDI at discovery time.
  EXPECT_EQ(r.arm_a.remaining_before,
            static_cast<long long>(r.arm_a.test_cases.size()));

  // Remaining counts stay within the yardstick and accuracy stays close.
  for (const RetrainOutcome* arm : {&r.arm_a, &r.arm_b}) {
    EXPECT_GE(arm->remaining_after, 0);
    EXPECT_LE(arm->remaining_after,
              static_cast<long long>(arm->test_cases.size()));
    EXPECT_NEAR(arm->f1_after, arm->f1_before, 0.05);
  }
}

TEST(HeadToHeadTest, MatchesManualPipelineReplication) {
  Dataset ds = BiasedSynth(21, 600);
  const std::vector<std::string> prot = ProtectedNames(ds.schema);
  const GenBudget budget{25, 25, 8};
  const uint64_t S = 4242;
  const CompareConfigEntry cfg_a{SeedStrategy::kRandom, GenEngine::kAequitas};
  const CompareConfigEntry cfg_b{SeedStrategy::kCluster, GenEngine::kAequitas};

  HeadToHeadResult r = head_to_head(cfg_a, cfg_b, ds, prot, budget, S);

  // Replicate the documented derived-stream pipeline step by step.
  auto [train_split, test_split] = split(ds, 0.6, derive_seed(S, "eval/split"));
  TrainedModel original =
      train(ModelKind::kMlp, train_split, {}, derive_seed(S, "eval/train"));

  OracleSet oracles;
  const ModelKind kinds[] = {ModelKind::kLogistic, ModelKind::kSvm,
                             ModelKind::kTree, ModelKind::kMlp};
  for (int k = 0; k < 4; ++k)
    oracles.models.push_back(train(kinds[k], train_split, {},
                                   derive_seed(S, "eval/oracle",
                                               static_cast<uint64_t>(k))));
  for (const TrainedModel& m : oracles.models) oracles.ptrs.push_back(&m);

  SeedSet seeds_a =
      seed_random(train_split, budget.seed_limit,
                  derive_seed(S, "eval/seeds/random-aequitas"));
  GenResult gen_a =
      generate(GenEngine::kAequitas, original, seeds_a, prot, budget,
               derive_seed(S, "eval/gen/random-aequitas"));
  SeedSet seeds_b =
      seed_cluster(train_split, budget.seed_limit, kDefaultClusterK,
                   derive_seed(S, "eval/seeds/cluster-aequitas"));
  GenResult gen_b =
      generate(GenEngine::kAequitas, original, seeds_b, prot, budget,
               derive_seed(S, "eval/gen/cluster-aequitas"));

  std::vector<Instance> expected_cases;
  std::set<Instance> seen;
  for (const GenResult* g : {&gen_a, &gen_b})
    for (const IdiRecord& rec : g->idis)
      if (seen.insert(rec.instance).second)
        expected_cases.push_back(rec.instance);
  EXPECT_EQ(r.arm_a.test_cases, expected_cases);

  EXPECT_EQ(r.arm_a.remaining_before,
            measure_remaining(original, expected_cases, prot));
  EXPECT_DOUBLE_EQ(r.arm_a.f1_before, f1_score(original, test_split));

  Dataset labeled_a = label_idis(gen_a.idis, oracles.ptrs, original);
  TrainedModel retrained_a =
      retrain(original, train_split, labeled_a, 10,
              derive_seed(S, "eval/retrain/random-aequitas"));
  EXPECT_EQ(model_to_json(r.arm_a.retrained), model_to_json(retrained_a));
  EXPECT_EQ(r.arm_a.remaining_after,
            measure_remaining(retrained_a, expected_cases, prot));
  EXPECT_DOUBLE_EQ(r.arm_a.f1_after, f1_score(retrained_a, test_split));

  Dataset labeled_b = label_idis(gen_b.idis, oracles.ptrs, original);
  TrainedModel retrained_b =
      retrain(original, train_split, labeled_b, 10,
              derive_seed(S, "eval/retrain/cluster-aequitas"));
  EXPECT_EQ(model_to_json(r.arm_b.retrained), model_to_json(retrained_b));
  EXPECT_EQ(r.arm_b.remaining_after,
            measure_remaining(retrained_b, expected_cases, prot));
}

TEST(HeadToHeadTest, RejectsBadBudgetAndEmptyProtectedList) {
  Dataset ds = BiasedSynth(21, 200);
  const CompareConfigEntry cfg{SeedStrategy::kRandom, GenEngine::kAequitas};
  EXPECT_THROW(
      head_to_head(cfg, cfg, ds, ProtectedNames(ds.schema), {0, 25, 8}, 1),
      ConfigError);
  EXPECT_THROW(head_to_head(cfg, cfg, ds, {}, {25, 25, 8}, 1), ConfigError);
}

TEST(HeadToHeadTest, JsonAndCsvRenderingsAreStable) {
  Dataset ds = BiasedSynth(21, 500);
  const CompareConfigEntry cfg_a{SeedStrategy::kRandom, GenEngine::kAequitas};
  const CompareConfigEntry cfg_b{SeedStrategy::kCluster, GenEngine::kAequitas};
  HeadToHeadResult r = head_to_head(cfg_a, cfg_b, ds, ProtectedNames(ds.schema),
                                    {20, 20, 6}, 5);
  HeadToHeadResult r2 = head_to_head(cfg_a, cfg_b, ds,
                                     ProtectedNames(ds.schema), {20, 20, 6}, 5);

  const std::string json = head_to_head_to_json(r, cfg_a, cfg_b);
  EXPECT_EQ(json, head_to_head_to_json(r2, cfg_a, cfg_b));
  EXPECT_NE(json.find("\"arm_a\""), std::string::npos);
  EXPECT_NE(json.find("\"remaining_after\""), std::string::npos);
  EXPECT_NE(json.find("\"random\""), std::string::npos);
  EXPECT_NE(json.find("\"cluster\""), std::string::npos);

  const std::string header = head_to_head_csv_header();
  const std::string row = head_to_head_csv_row(r, cfg_a, cfg_b, "trial0");
  EXPECT_EQ(std::count(header.begin(), header.end(), ','),
            std::count(row.begin(), row.end(), ','));
  EXPECT_EQ(row.rfind("trial0,", 0), 0u);
  EXPECT_NE(row.find("random+aequitas"), std::string::npos);
  EXPECT_NE(row.find("cluster+aequitas"), std::string::npos);
}

}  // namespace
}  // namespace fairlens
