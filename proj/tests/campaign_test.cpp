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

#include "fairlens/campaign.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "fairlens/dataset_io.hpp"
#include "fairlens/discrimination.hpp"
#include "fairlens/error.hpp"
#include "fairlens/model_io.hpp"
#include "fairlens/rng.hpp"
#include "fairlens/synth.hpp"
#include "fairlens/version.hpp"
#include "gtest/gtest.h"

namespace fairlens {
namespace {

Dataset BiasedSynth(uint64_t seed, int rows = 700) {
  SynthSpec spec;
  spec.attrs = 6;
  spec.rows = rows;
  spec.domain_size = 6;
  spec.protected_count = 1;
  spec.bias = 0.8;
  spec.noise = 0.02;
  spec.seed = seed;
  return synth_dataset(spec);
}

CampaignConfig SmallCampaign(uint64_t rng_seed = 7) {
  CampaignConfig cfg;
  cfg.budget = {25, 25, 8};
  cfg.trials = 1;
  cfg.rng_seed = rng_seed;
  return cfg;
}

// A configuration with every field moved off its default.
CampaignConfig CustomConfig() {
  CampaignConfig cfg;
  cfg.dataset_path = "data/example.csv";
  cfg.schema_path = "data/example.schema";
  cfg.protected_attrs = {"gender", "race"};
  cfg.model = ModelKind::kTree;
  cfg.train.lr_iterations = 99;
  cfg.train.lr_learning_rate = 0.25;
  cfg.train.svm_epochs = 77;
  cfg.train.svm_learning_rate = 0.005;
  cfg.train.svm_l2 = 2e-4;
  cfg.train.tree_max_depth = 6;
  cfg.train.tree_min_leaf = 3;
  cfg.train.mlp.layer_widths = {8, 4, 1};
  cfg.train.mlp.epochs = 12;
  cfg.train.mlp.batch_size = 64;
  cfg.train.mlp.learning_rate = 0.02;
  cfg.strategy = SeedStrategy::kCluster;
  cfg.engine = GenEngine::kAdf;
  cfg.budget = {50, 60, 70};
  cfg.cluster_k = 7;
  cfg.dbscan.eps = 0.13;
  cfg.dbscan.min_pts = 6;
  cfg.shap.mode = ShapMode::kExact;
  cfg.shap.n_coalitions = 256;
  cfg.shap.background_rows = 16;
  cfg.trials = 3;
  cfg.rng_seed = 123456789012345ull;
  cfg.retrain_epochs = 4;
  cfg.from_scratch = true;
  return cfg;
}

// ---------------------------------------------------------------------------
// configuration

TEST(CampaignConfigTest, DefaultsMatchTheDocumentedValues) {
  CampaignConfig cfg;
  EXPECT_EQ(cfg.budget.seed_limit, 100);
  EXPECT_EQ(cfg.budget.global_limit, 100);
  EXPECT_EQ(cfg.budget.local_limit, 100);
  EXPECT_DOUBLE_EQ(cfg.dbscan.eps, 0.09);
  EXPECT_EQ(cfg.dbscan.min_pts, 10);
  EXPECT_EQ(cfg.retrain_epochs, 10);
  EXPECT_EQ(cfg.trials, 1);
  EXPECT_EQ(cfg.model, ModelKind::kMlp);
  EXPECT_EQ(cfg.strategy, SeedStrategy::kIand);
  EXPECT_EQ(cfg.engine, GenEngine::kAequitas);
  EXPECT_EQ(cfg.train.mlp.layer_widths, (std::vector<int>{30, 20, 15, 10, 5, 1}));
  EXPECT_EQ(cfg.cluster_k, 4);
}

TEST(CampaignConfigTest, TextRoundTripPreservesEveryField) {
  const CampaignConfig original = CustomConfig();
  const std::string text = campaign_config_to_text(original);
  const CampaignConfig parsed = parse_campaign_config(text);
  EXPECT_EQ(parsed, original);
  // Defaults survive the round trip as well.
  EXPECT_EQ(parse_campaign_config(campaign_config_to_text(CampaignConfig{})),
            CampaignConfig{});
}

TEST(CampaignConfigTest, ParsesKeysCommentsAndWhitespace) {
  const std::string text =
      "# fairness campaign\n"
      "dataset = data/census.csv   # inline comment\n"
      "schema = data/census.schema\n"
      "\n"
      "protected = gender, race\n"
      "model = svm\n"
      "strategy = random\n"
      "engine = adf\n"
      "seed_limit = 10\n"
      "trials = 2\n"
      "rng_seed = 99\n";
  const CampaignConfig cfg = parse_campaign_config(text);
  EXPECT_EQ(cfg.dataset_path, "data/census.csv");
  EXPECT_EQ(cfg.schema_path, "data/census.schema");
  EXPECT_EQ(cfg.protected_attrs, (std::vector<std::string>{"gender", "race"}));
  EXPECT_EQ(cfg.model, ModelKind::kSvm);
  EXPECT_EQ(cfg.strategy, SeedStrategy::kRandom);
  EXPECT_EQ(cfg.engine, GenEngine::kAdf);
  EXPECT_EQ(cfg.budget.seed_limit, 10);
  EXPECT_EQ(cfg.budget.global_limit, 100);  // untouched default
  EXPECT_EQ(cfg.trials, 2);
  EXPECT_EQ(cfg.rng_seed, 99u);
}

TEST(CampaignConfigTest, RejectsMalformedInput) {
  EXPECT_THROW(parse_campaign_config("no_such_key = 3\n"), ConfigError);
  EXPECT_THROW(parse_campaign_config("just some words\n"), ConfigError);
  EXPECT_THROW(parse_campaign_config("trials = banana\n"), ConfigError);
  EXPECT_THROW(parse_campaign_config("from_scratch = maybe\n"), ConfigError);
  EXPECT_THROW(parse_campaign_config("model = forest\n"), ConfigError);
  EXPECT_THROW(parse_campaign_config("dbscan_eps = 0.09x\n"), ConfigError);
  EXPECT_THROW(load_campaign_config("/no/such/config.txt"), ConfigError);
}

TEST(CampaignConfigTest, ValidationRejectsOutOfRangeFields) {
  auto broken = [](auto mutate) {
    CampaignConfig cfg;
    mutate(cfg);
    return cfg;
  };
  EXPECT_THROW(validate_campaign_config(
                   broken([](CampaignConfig& c) { c.trials = 0; })),
               ConfigError);
  EXPECT_THROW(validate_campaign_config(
                   broken([](CampaignConfig& c) { c.retrain_epochs = -1; })),
               ConfigError);
  EXPECT_THROW(validate_campaign_config(
                   broken([](CampaignConfig& c) { c.cluster_k = 0; })),
               ConfigError);
  EXPECT_THROW(validate_campaign_config(
                   broken([](CampaignConfig& c) { c.dbscan.eps = 0.0; })),
               ConfigError);
  EXPECT_THROW(validate_campaign_config(
                   broken([](CampaignConfig& c) { c.dbscan.min_pts = 0; })),
               ConfigError);
  EXPECT_THROW(validate_campaign_config(
                   broken([](CampaignConfig& c) { c.shap.n_coalitions = 0; })),
               ConfigError);
  EXPECT_THROW(validate_campaign_config(broken([](CampaignConfig& c) {
                 c.shap.background_rows = 0;
               })),
               ConfigError);
  EXPECT_THROW(validate_campaign_config(broken([](CampaignConfig& c) {
                 c.budget.seed_limit = 0;
               })),
               ConfigError);
  EXPECT_NO_THROW(validate_campaign_config(CampaignConfig{}));
}

TEST(CampaignConfigTest, SelectProtectedFlagsExactlyTheRequestedNames) {
  Dataset ds = BiasedSynth(3, 120);
  // Pick a currently unprotected attribute by name.
  std::string target;
  std::string previously_protected;
  for (const AttributeSpec& attr : ds.schema.attributes) {
    if (attr.is_protected)
      previously_protected = attr.name;
    else if (target.empty())
      target = attr.name;
  }
  ASSERT_FALSE(target.empty());
  ASSERT_FALSE(previously_protected.empty());

  Dataset out = select_protected(ds, {target});
  for (const AttributeSpec& attr : out.schema.attributes)
    EXPECT_EQ(attr.is_protected, attr.name == target) << attr.name;
  // Rows and labels are untouched.
  EXPECT_EQ(out.rows, ds.rows);
  EXPECT_EQ(out.labels, ds.labels);

  // Empty selection keeps the schema exactly as shipped.
  EXPECT_EQ(select_protected(ds, {}).schema.fingerprint(),
            ds.schema.fingerprint());

  EXPECT_THROW(select_protected(ds, {"no_such_attribute"}), ConfigError);
}

// ---------------------------------------------------------------------------
// run_campaign

TEST(RunCampaignTest, CanonicalJsonIsReproducible) {
  Dataset ds = BiasedSynth(21, 600);
  const CampaignConfig cfg = SmallCampaign();
  CampaignReport a = run_campaign(cfg, ds);
  CampaignReport b = run_campaign(cfg, ds);
  EXPECT_EQ(report_to_json(a, false), report_to_json(b, false));
  EXPECT_EQ(report_to_csv(a, false), report_to_csv(b, false));
  EXPECT_EQ(a.version, kToolVersion);
  ASSERT_EQ(a.trials.size(), 1u);
  EXPECT_GT(a.trials[0].total_idis, 0);
  EXPECT_GT(a.f1_before, 0.5);
}

TEST(RunCampaignTest, ReportMatchesManualPipelineReplication) {
  Dataset ds = BiasedSynth(21, 600);
  CampaignConfig cfg = SmallCampaign(4242);
  cfg.strategy = SeedStrategy::kRandom;
  const uint64_t S = cfg.rng_seed;

  CampaignReport report = run_campaign(cfg, ds);
  ASSERT_EQ(report.trials.size(), 1u);
  const CampaignTrial& trial = report.trials[0];

  // Replicate the documented derived-stream pipeline.
  std::vector<std::string> prot;
  for (int p : ds.schema.protected_indices())
    prot.push_back(ds.schema.attributes[static_cast<size_t>(p)].name);
  auto [train_split, test_split] = split(ds, 0.6, derive_seed(S, "campaign/split"));
  TrainedModel original = train(ModelKind::kMlp, train_split, cfg.train,
                                derive_seed(S, "campaign/train"));
  EXPECT_DOUBLE_EQ(report.f1_before, f1_score(original, test_split));

  const ModelKind kinds[] = {ModelKind::kLogistic, ModelKind::kSvm,
                             ModelKind::kTree, ModelKind::kMlp};
  std::vector<TrainedModel> oracles;
  for (int k = 0; k < 4; ++k)
    oracles.push_back(train(kinds[k], train_split, cfg.train,
                            derive_seed(S, "campaign/oracle",
                                        static_cast<uint64_t>(k))));
  std::vector<const TrainedModel*> oracle_ptrs;
  for (const TrainedModel& o : oracles) oracle_ptrs.push_back(&o);

  SeedSet seeds = seed_random(train_split, cfg.budget.seed_limit,
                              derive_seed(S, "campaign/seeds", 0));
  const long long cap =
      std::max<long long>(witness_product_size(ds.schema, prot), 1);
  IdiRateResult seed_metrics = idi_rate(original, seeds.seeds, prot, cap);
  EXPECT_EQ(trial.seed_idis,
            static_cast<long long>(seed_metrics.records.size()));
  EXPECT_DOUBLE_EQ(trial.seed_rate, seed_metrics.rate);

  GenResult gen = generate(cfg.engine, original, seeds, prot, cfg.budget,
                           derive_seed(S, "campaign/gen", 0));
  EXPECT_EQ(trial.global_idis, gen.global_count);
  EXPECT_EQ(trial.local_idis, gen.local_count);
  EXPECT_EQ(trial.explored, gen.explored);
  EXPECT_DOUBLE_EQ(
      trial.gen_rate,
      gen.explored > 0 ? static_cast<double>(gen.idis.size()) / gen.explored
                       : 0.0);

  std::vector<IdiRecord> discovered;
  std::unordered_set<Instance, InstanceHash> seen;
  for (const std::vector<IdiRecord>* source : {&seed_metrics.records, &gen.idis})
    for (const IdiRecord& rec : *source)
      if (seen.insert(rec.instance).second) discovered.push_back(rec);
  EXPECT_EQ(trial.total_idis, static_cast<long long>(discovered.size()));

  Dataset labeled = label_idis(discovered, oracle_ptrs, original);
  TrainedModel retrained =
      retrain(original, train_split, labeled, cfg.retrain_epochs,
              derive_seed(S, "campaign/retrain", 0), cfg.from_scratch);
  std::vector<Instance> cases;
  for (const IdiRecord& rec : discovered) cases.push_back(rec.instance);
  EXPECT_EQ(trial.remaining_before, measure_remaining(original, cases, prot));
  EXPECT_EQ(trial.remaining_after, measure_remaining(retrained, cases, prot));
  EXPECT_DOUBLE_EQ(trial.f1_after, f1_score(retrained, test_split));
}

TEST(RunCampaignTest, SummaryHoldsPerFieldMeans) {
  Dataset ds = BiasedSynth(33, 500);
  CampaignConfig cfg = SmallCampaign(11);
  cfg.trials = 3;
  cfg.strategy = SeedStrategy::kRandom;
  CampaignReport r = run_campaign(cfg, ds);
  ASSERT_EQ(r.trials.size(), 3u);
  double total = 0.0, remaining_after = 0.0, f1 = 0.0;
  for (const CampaignTrial& t : r.trials) {
    total += t.total_idis / 3.0;
    remaining_after += t.remaining_after / 3.0;
    f1 += t.f1_after / 3.0;
  }
  EXPECT_DOUBLE_EQ(r.summary.total_idis, total);
  EXPECT_DOUBLE_EQ(r.summary.remaining_after, remaining_after);
  EXPECT_DOUBLE_EQ(r.summary.f1_after, f1);
}

TEST(RunCampaignTest, BudgetSweepIsMonotoneUnderAFixedMasterSeed) {
  Dataset ds = BiasedSynth(21, 600);
  long long prev = -1;
  for (int limit : {10, 30, 60}) {
    CampaignConfig cfg;
    cfg.budget = {limit, limit, limit};
    cfg.rng_seed = 5;
    CampaignReport r = run_campaign(cfg, ds);
    EXPECT_GE(r.trials[0].total_idis, prev) << "limit " << limit;
    prev = r.trials[0].total_idis;
  }
}

TEST(RunCampaignTest, ErrorsCarryThePhaseTag) {
  Dataset ds = BiasedSynth(21, 300);

  CampaignConfig bad_protected = SmallCampaign();
  bad_protected.protected_attrs = {"no_such_attribute"};
  try {
    run_campaign(bad_protected, ds);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("select-protected"),
              std::string::npos);
  }

  CampaignConfig adf_on_tree = SmallCampaign();
  adf_on_tree.model = ModelKind::kTree;
  adf_on_tree.engine = GenEngine::kAdf;
  try {
    run_campaign(adf_on_tree, ds);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("generate"), std::string::npos);
  }

  CampaignConfig bad_paths = SmallCampaign();
  bad_paths.dataset_path = "/no/such/file.csv";
  bad_paths.schema_path = "/no/such/file.schema";
  try {
    run_campaign(bad_paths);
    FAIL() << "expected a load error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("load"), std::string::npos);
  }
}

TEST(RunCampaignTest, FileBasedRunMatchesInMemoryRun) {
  Dataset ds = BiasedSynth(21, 400);
  const std::string dir = ::testing::TempDir();
  const std::string csv_path = dir + "/campaign_data.csv";
  const std::string schema_path = dir + "/campaign_data.schema";
  save_csv(ds, csv_path);
  save_schema(ds.schema, schema_path);

  CampaignConfig cfg = SmallCampaign();
  cfg.dataset_path = csv_path;
  cfg.schema_path = schema_path;
  CampaignReport from_files = run_campaign(cfg);
  CampaignReport in_memory = run_campaign(cfg, ds);
  EXPECT_EQ(report_to_json(from_files, false), report_to_json(in_memory, false));
}

// ---------------------------------------------------------------------------
// report emission

TEST(ReportIoTest, JsonRoundTripIsByteIdentical) {
  Dataset ds = BiasedSynth(21, 500);
  CampaignConfig cfg = SmallCampaign();
  cfg.trials = 2;
  CampaignReport r = run_campaign(cfg, ds);
  const std::string once = report_to_json(r, true);
  const std::string twice = report_to_json(report_from_json(once), true);
  EXPECT_EQ(once, twice);
  // The canonical (timing-free) form round-trips through the full form.
  EXPECT_EQ(report_to_json(report_from_json(once), false),
            report_to_json(r, false));
}

TEST(ReportIoTest, CsvCountsEqualJsonCounts) {
  Dataset ds = BiasedSynth(33, 500);
  CampaignConfig cfg = SmallCampaign(11);
  cfg.trials = 2;
  CampaignReport r = run_campaign(cfg, ds);

  const std::string csv = report_to_csv(r, false);
  std::stringstream lines(csv);
  std::string line;
  ASSERT_TRUE(std::getline(lines, line));
  EXPECT_EQ(line,
            "trial,seed_idis,seed_rate,global_idis,local_idis,total_idis,"
            "explored,gen_rate,remaining_before,remaining_after,f1_before,"
            "f1_after");

  for (size_t i = 0; i < r.trials.size(); ++i) {
    ASSERT_TRUE(std::getline(lines, line)) << "trial row " << i;
    std::stringstream fields(line);
    std::string field;
    std::vector<std::string> cols;
    while (std::getline(fields, field, ',')) cols.push_back(field);
    ASSERT_EQ(cols.size(), 12u);
    EXPECT_EQ(std::stoll(cols[0]), static_cast<long long>(i));
    EXPECT_EQ(std::stoll(cols[1]), r.trials[i].seed_idis);
    EXPECT_EQ(std::stoll(cols[3]), r.trials[i].global_idis);
    EXPECT_EQ(std::stoll(cols[4]), r.trials[i].local_idis);
    EXPECT_EQ(std::stoll(cols[5]), r.trials[i].total_idis);
    EXPECT_EQ(std::stoll(cols[6]), r.trials[i].explored);
    EXPECT_EQ(std::stoll(cols[8]), r.trials[i].remaining_before);
    EXPECT_EQ(std::stoll(cols[9]), r.trials[i].remaining_after);
  }
  ASSERT_TRUE(std::getline(lines, line));
  EXPECT_EQ(line.rfind("mean,", 0), 0u);
  EXPECT_FALSE(std::getline(lines, line));  // nothing after the mean row

  // The timed variant appends exactly the three wall-clock columns.
  const std::string timed = report_to_csv(r, true);
  EXPECT_NE(timed.find(",seed_wall_s,gen_wall_s,retrain_wall_s"),
            std::string::npos);
}

TEST(ReportIoTest, EmitWritesFilesAndRejectsUnwritablePaths) {
  Dataset ds = BiasedSynth(21, 400);
  CampaignReport r = run_campaign(SmallCampaign(), ds);
  const std::string dir = ::testing::TempDir();

  const std::string json_path = dir + "/report.json";
  emit_report(r, ReportFormat::kJson, json_path);
  std::ifstream json_in(json_path, std::ios::binary);
  std::stringstream json_buf;
  json_buf << json_in.rdbuf();
  EXPECT_EQ(json_buf.str(), report_to_json(r, true));
  EXPECT_EQ(report_to_json(report_from_json(json_buf.str()), false),
            report_to_json(r, false));

  const std::string csv_path = dir + "/report.csv";
  emit_report(r, ReportFormat::kCsv, csv_path);
  std::ifstream csv_in(csv_path, std::ios::binary);
  std::stringstream csv_buf;
  csv_buf << csv_in.rdbuf();
  EXPECT_EQ(csv_buf.str(), report_to_csv(r, true));

  EXPECT_THROW(emit_report(r, ReportFormat::kJson, "/no/such/dir/report.json"),
               DataError);
}

TEST(ReportIoTest, MalformedJsonRaisesDataError) {
  EXPECT_THROW(report_from_json("not json at all"), DataError);
  EXPECT_THROW(report_from_json("{\"fairlens_version\": \"0.1.0\"}"),
               DataError);
}

}  // namespace
}  // namespace fairlens
