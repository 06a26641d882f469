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
//
// fairlens: discover, explain, and repair individual discrimination in
// tabular binary classifiers. Subcommands compose via the filesystem:
//   synth -> train -> seeds -> generate -> explain / eval
// or everything at once: run (driven by a key = value config file).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairlens/campaign.hpp"
#include "fairlens/dataset_io.hpp"
#include "fairlens/discrimination.hpp"
#include "fairlens/error.hpp"
#include "fairlens/evalharness.hpp"
#include "fairlens/generation.hpp"
#include "fairlens/model.hpp"
#include "fairlens/model_io.hpp"
#include "fairlens/parallel.hpp"
#include "fairlens/preprocess.hpp"
#include "fairlens/rng.hpp"
#include "fairlens/seeding.hpp"
#include "fairlens/shap.hpp"
#include "fairlens/synth.hpp"
#include "fairlens/version.hpp"
#include "nlohmann/json.hpp"

namespace {

using namespace fairlens;
using nlohmann::ordered_json;

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(csv);
  while (std::getline(ss, item, ',')) {
    size_t b = item.find_first_not_of(" \t");
    size_t e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<int> parse_widths(const std::string& csv) {
  std::vector<int> out;
  for (const std::string& item : split_names(csv)) {
    try {
      size_t idx = 0;
      out.push_back(std::stoi(item, &idx));
      if (idx != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad layer width '" + item + "' in '" + csv + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty layer width list '" + csv + "'");
  return out;
}

// Loads schema + data and applies the protected-attribute selection.
Dataset load_selected(const std::string& schema_path,
                      const std::string& data_path,
                      const std::string& protected_csv) {
  DatasetSchema schema = load_schema(schema_path);
  Dataset ds = load_csv(data_path, schema);
  return select_protected(ds, split_names(protected_csv));
}

std::vector<std::string> protected_names(const DatasetSchema& schema) {
  std::vector<std::string> names;
  for (int p : schema.protected_indices())
    names.push_back(schema.attributes[static_cast<size_t>(p)].name);
  return names;
}

CompareConfigEntry parse_arm(const std::string& text) {
  size_t plus = text.find('+');
  if (plus == std::string::npos)
    throw ConfigError("expected strategy+engine (e.g. iand+aequitas), got '" +
                      text + "'");
  CompareConfigEntry entry;
  entry.strategy = parse_seed_strategy(text.substr(0, plus));
  entry.engine = parse_engine(text.substr(plus + 1));
  return entry;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << text;
  if (!out) throw DataError("error while writing '" + path + "'");
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string schema_path;  // schema-driven mode when set
  std::string out;
  std::string schema_out;
  int attrs = 8;
  int rows = 1000;
  int domain = 10;
  int protected_count = 1;
  double bias = 3.0;
  double gate = 0.2;
  double noise = 0.03;
  uint64_t rule_seed = 1;
  uint64_t seed = 1;
};

void run_synth(const SynthArgs& a) {
  Dataset ds;
  if (!a.schema_path.empty()) {
    DatasetSchema schema = load_schema(a.schema_path);
    SynthRule rule = make_synth_rule(schema, a.bias, a.gate, a.rule_seed);
    ds = synth_rows(schema, a.rows, rule, a.noise, a.seed);
  } else {
    SynthSpec spec;
    spec.attrs = a.attrs;
    spec.rows = a.rows;
    spec.domain_size = a.domain;
    spec.protected_count = a.protected_count;
    spec.bias = a.bias;
    spec.gate_threshold = a.gate;
    spec.noise = a.noise;
    spec.seed = a.seed;
    ds = synth_dataset(spec);
  }
  save_csv(ds, a.out);
  if (!a.schema_out.empty()) save_schema(ds.schema, a.schema_out);
  long long positives = 0;
  for (int label : ds.labels) positives += label;
  std::printf("wrote %zu rows (%zu attributes, %.1f%% positive) to %s\n",
              ds.size(), ds.schema.attribute_count(),
              ds.size() ? 100.0 * positives / ds.size() : 0.0, a.out.c_str());
}

// --- ingest ----------------------------------------------------------------

struct IngestArgs {
  std::string schema_path;
  std::string in;
  std::string out;
};

void run_ingest(const IngestArgs& a) {
  DatasetSchema schema = load_schema(a.schema_path);
  RawTable raw = load_raw_csv(a.in);
  Dataset ds = preprocess_bin(raw, schema);
  save_csv(ds, a.out);
  std::printf("ingested %zu rows into %s\n", ds.size(), a.out.c_str());
}

// --- train -----------------------------------------------------------------

struct TrainArgs {
  std::string schema_path;
  std::string data_path;
  std::string protected_csv;
  std::string model = "mlp";
  std::string out;
  std::string out_train;
  std::string out_test;
  double split_fraction = 0.0;
  uint64_t seed = 0;
  std::string mlp_widths;
  TrainConfig cfg;
};

void run_train(const TrainArgs& a) {
  Dataset ds = load_selected(a.schema_path, a.data_path, a.protected_csv);
  TrainConfig cfg = a.cfg;
  if (!a.mlp_widths.empty()) cfg.mlp.layer_widths = parse_widths(a.mlp_widths);
  const ModelKind kind = parse_model_kind(a.model);

  Dataset train_split = ds;
  std::optional<Dataset> test_split;
  if (a.split_fraction > 0.0) {
    auto [tr, te] = split(ds, a.split_fraction, derive_seed(a.seed, "cli/split"));
    train_split = std::move(tr);
    test_split = std::move(te);
    if (!a.out_train.empty()) save_csv(train_split, a.out_train);
    if (!a.out_test.empty()) save_csv(*test_split, a.out_test);
  } else if (!a.out_train.empty() || !a.out_test.empty()) {
    throw ConfigError("--out-train/--out-test require --split");
  }

  TrainedModel m =
      train(kind, train_split, cfg, derive_seed(a.seed, "cli/train"));
  save_model(m, a.out);
  const double f1 =
      test_split ? f1_score(m, *test_split) : f1_score(m, train_split);
  std::printf("trained %s on %zu rows; weighted F1 (%s) %.4f; model -> %s\n",
              model_kind_name(kind).c_str(), train_split.size(),
              test_split ? "held-out" : "training", f1, a.out.c_str());
}

// --- seeds -----------------------------------------------------------------

struct SeedsArgs {
  std::string schema_path;
  std::string data_path;
  std::string protected_csv;
  std::string model_path;
  std::string strategy = "iand";
  std::string out;
  int budget = 100;
  int cluster_k = kDefaultClusterK;
  DbscanParams dbscan;
  SeedShapConfig shap;
  std::string shap_mode = "sampled";
  uint64_t seed = 0;
};

void run_seeds(const SeedsArgs& a) {
  const SeedStrategy strategy = parse_seed_strategy(a.strategy);
  Dataset ds = load_selected(a.schema_path, a.data_path, a.protected_csv);
  SeedSet set;
  switch (strategy) {
    case SeedStrategy::kRandom:
      set = seed_random(ds, a.budget, a.seed);
      break;
    case SeedStrategy::kCluster:
      set = seed_cluster(ds, a.budget, a.cluster_k, a.seed);
      break;
    case SeedStrategy::kIand: {
      TrainedModel m = load_model(a.model_path);
      if (a.protected_csv.empty())
        ds = select_protected(ds, protected_names(m.schema()));
      SeedShapConfig shap = a.shap;
      shap.mode = parse_shap_mode(a.shap_mode);
      set = seed_iand(m, ds, a.budget, a.dbscan, shap, a.seed);
      break;
    }
  }
  save_seedset(set, a.out);
  long long flagged = 0;
  for (bool f : set.idi_flags) flagged += f;
  std::printf(
      "%zu %s seeds (%lld discriminatory at selection, %d random fill) -> "
      "%s\n",
      set.seeds.size(), seed_strategy_name(strategy).c_str(), flagged,
      set.fill_count, a.out.c_str());
}

// --- generate --------------------------------------------------------------

struct GenerateArgs {
  std::string model_path;
  std::string seeds_path;
  std::string protected_csv;
  std::string engine = "aequitas";
  std::string out;
  int global_limit = 100;
  int local_limit = 100;
  uint64_t seed = 0;
};

void run_generate(const GenerateArgs& a) {
  TrainedModel m = load_model(a.model_path);
  SeedSet seeds = load_seedset(a.seeds_path);
  std::vector<std::string> prot = split_names(a.protected_csv);
  if (prot.empty()) prot = protected_names(m.schema());

  GenBudget budget;
  budget.seed_limit = std::max<int>(1, static_cast<int>(seeds.seeds.size()));
  budget.global_limit = a.global_limit;
  budget.local_limit = a.local_limit;

  GenResult result =
      generate(parse_engine(a.engine), m, seeds, prot, budget, a.seed);
  save_records(result.idis, a.out);
  std::printf(
      "%zu discriminatory instances (%lld global, %lld local) over %lld "
      "evaluations in %.2fs -> %s\n",
      result.idis.size(), result.global_count, result.local_count,
      result.explored, result.wall_time, a.out.c_str());
}

// --- explain ---------------------------------------------------------------

struct ExplainArgs {
  std::string model_path;
  std::string background_path;
  std::string records_path;
  std::string instances_path;
  std::string mode;  // "", "exact", "sampled"
  int coalitions = kShapDefaultCoalitions;
  int background_rows = 32;
  int limit = 0;  // 0: all
  uint64_t seed = 0;
  std::string out;
};

ordered_json explain_one(const TrainedModel& m, const Instance& x,
                         const Dataset& background, const ShapOptions& opts) {
  ShapVector sv = shap_values(m, x, background, opts);
  ordered_json j;
  j["row"] = x.values;
  const double prediction = m.predict_proba(x);
  j["prediction"] = prediction;
  j["base_value"] = sv.base_value;
  std::vector<double> values(sv.values.data(),
                             sv.values.data() + sv.values.size());
  j["values"] = values;
  j["mode"] = shap_mode_name(sv.mode);
  j["reconstruction_error"] =
      std::abs(sv.base_value + sv.values.sum() - prediction);
  return j;
}

void run_explain(const ExplainArgs& a) {
  if (a.records_path.empty() == a.instances_path.empty())
    throw ConfigError("explain needs exactly one of --records or --instances");
  TrainedModel m = load_model(a.model_path);
  const DatasetSchema& schema = m.schema();
  Dataset background_rows_ds = load_csv(a.background_path, schema);
  Dataset background = make_background(background_rows_ds, a.background_rows,
                                       derive_seed(a.seed, "cli/background"));

  ShapOptions opts;
  if (!a.mode.empty()) opts.mode = parse_shap_mode(a.mode);
  opts.n_coalitions = a.coalitions;

  ordered_json doc;
  doc["model"] = model_kind_name(m.kind());
  std::vector<std::string> names;
  for (const AttributeSpec& attr : schema.attributes) names.push_back(attr.name);
  doc["attributes"] = names;
  ordered_json items = ordered_json::array();

  if (!a.records_path.empty()) {
    std::vector<IdiRecord> records = load_records(a.records_path);
    size_t count = records.size();
    if (a.limit > 0) count = std::min<size_t>(count, a.limit);
    for (size_t i = 0; i < count; ++i) {
      opts.rng_seed = derive_seed(a.seed, "cli/shap", 2 * i);
      ordered_json inst = explain_one(m, records[i].instance, background, opts);
      inst["pair"] = i;
      inst["role"] = "instance";
      items.push_back(std::move(inst));
      opts.rng_seed = derive_seed(a.seed, "cli/shap", 2 * i + 1);
      ordered_json wit = explain_one(m, records[i].witness, background, opts);
      wit["pair"] = i;
      wit["role"] = "witness";
      items.push_back(std::move(wit));
    }
  } else {
    Dataset instances = load_csv(a.instances_path, schema);
    size_t count = instances.size();
    if (a.limit > 0) count = std::min<size_t>(count, a.limit);
    for (size_t i = 0; i < count; ++i) {
      opts.rng_seed = derive_seed(a.seed, "cli/shap", i);
      items.push_back(explain_one(m, instances.rows[i], background, opts));
    }
  }
  doc["explanations"] = std::move(items);
  write_text(a.out, doc.dump(2) + "\n");
  std::printf("explained %zu predictions -> %s\n", doc["explanations"].size(),
              a.out.c_str());
}

// --- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string schema_path;
  std::string data_path;
  std::string protected_csv;
  std::string config_a = "iand+aequitas";
  std::string config_b = "random+aequitas";
  std::string model = "mlp";
  std::string out;
  std::string csv_out;
  std::string label = "eval";
  GenBudget budget;
  int epochs = 10;
  bool from_scratch = false;
  uint64_t seed = 0;
};

void run_eval(const EvalArgs& a) {
  Dataset ds = load_selected(a.schema_path, a.data_path, a.protected_csv);
  std::vector<std::string> prot = protected_names(ds.schema);
  const CompareConfigEntry arm_a = parse_arm(a.config_a);
  const CompareConfigEntry arm_b = parse_arm(a.config_b);
  HeadToHeadResult result =
      head_to_head(arm_a, arm_b, ds, prot, a.budget, a.seed,
                   parse_model_kind(a.model), {}, a.epochs, a.from_scratch);
  write_text(a.out, head_to_head_to_json(result, arm_a, arm_b));
  if (!a.csv_out.empty())
    write_text(a.csv_out, head_to_head_csv_header() +
                              head_to_head_csv_row(result, arm_a, arm_b,
                                                   a.label));
  std::printf(
      "%zu pooled test cases; remaining %lld -> %lld (%s) vs %lld (%s); "
      "F1 %.4f -> %.4f / %.4f -> %s\n",
      result.arm_a.test_cases.size(), result.arm_a.remaining_before,
      result.arm_a.remaining_after, a.config_a.c_str(),
      result.arm_b.remaining_after, a.config_b.c_str(), result.arm_a.f1_before,
      result.arm_a.f1_after, result.arm_b.f1_after, a.out.c_str());
}

// --- compare ---------------------------------------------------------------

struct CompareArgs {
  std::string schema_path;
  std::string data_path;
  std::string protected_csv;
  std::string configs = "iand+aequitas,random+aequitas";
  std::string model = "mlp";
  std::string out;
  GenBudget budget;
  int trials = 5;
  bool timings = false;
  uint64_t seed = 0;
};

void run_compare(const CompareArgs& a) {
  Dataset ds = load_selected(a.schema_path, a.data_path, a.protected_csv);
  std::vector<std::string> prot = protected_names(ds.schema);
  std::vector<CompareConfigEntry> configs;
  for (const std::string& item : split_names(a.configs))
    configs.push_back(parse_arm(item));
  ComparisonTable table =
      compare_engines(configs, ds, prot, a.budget, a.trials, a.seed,
                      parse_model_kind(a.model));
  const std::string csv = comparison_to_csv(table, a.timings);
  write_text(a.out, csv);
  std::fputs(csv.c_str(), stdout);
}

// --- run -------------------------------------------------------------------

struct RunArgs {
  std::string config_path;
  std::string out;
  std::string csv_out;
};

void run_run(const RunArgs& a) {
  CampaignConfig config = load_campaign_config(a.config_path);
  CampaignReport report = run_campaign(config);
  emit_report(report, ReportFormat::kJson, a.out);
  if (!a.csv_out.empty()) emit_report(report, ReportFormat::kCsv, a.csv_out);
  std::printf(
      "campaign done: %d trial(s); mean IDIs %.1f (rate %.4f); remaining "
      "%.1f -> %.1f; F1 %.4f -> %.4f; report -> %s\n",
      static_cast<int>(report.trials.size()), report.summary.total_idis,
      report.summary.gen_rate, report.summary.remaining_before,
      report.summary.remaining_after, report.f1_before,
      report.summary.f1_after, a.out.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairness testing for tabular binary classifiers"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "worker thread cap (0 = hardware concurrency)");

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--schema", synth_args.schema_path,
                    "label rows for an existing schema (omit to invent one)");
  synth->add_option("--rows", synth_args.rows, "row count");
  synth->add_option("--attrs", synth_args.attrs, "attribute count (no --schema)");
  synth->add_option("--domain", synth_args.domain,
                    "values per attribute (no --schema)");
  synth->add_option("--protected-count", synth_args.protected_count,
                    "leading binary protected attributes (no --schema)");
  synth->add_option("--bias", synth_args.bias, "planted protected effect");
  synth->add_option("--gate", synth_args.gate,
                    "gate threshold (higher = smaller biased region)");
  synth->add_option("--noise", synth_args.noise, "label flip probability");
  synth->add_option("--rule-seed", synth_args.rule_seed,
                    "labeling rule seed (--schema mode)");
  synth->add_option("--seed", synth_args.seed, "row sampling seed");
  synth->add_option("--out", synth_args.out, "output CSV")->required();
  synth->add_option("--schema-out", synth_args.schema_out,
                    "also write the schema here");
  synth->callback([&] {
    set_thread_cap(threads);
    run_synth(synth_args);
  });

  IngestArgs ingest_args;
  CLI::App* ingest =
      app.add_subcommand("ingest", "bin a raw numeric CSV into schema domains");
  ingest->add_option("--schema", ingest_args.schema_path, "schema file")
      ->required();
  ingest->add_option("--in", ingest_args.in, "raw CSV with header")->required();
  ingest->add_option("--out", ingest_args.out, "encoded CSV")->required();
  ingest->callback([&] {
    set_thread_cap(threads);
    run_ingest(ingest_args);
  });

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "train a model");
  train_cmd->add_option("--schema", train_args.schema_path, "schema file")
      ->required();
  train_cmd->add_option("--data", train_args.data_path, "encoded CSV")
      ->required();
  train_cmd->add_option("--protected", train_args.protected_csv,
                        "comma-separated protected attributes (overrides "
                        "schema flags)");
  train_cmd->add_option("--model", train_args.model,
                        "logistic | svm | tree | mlp");
  train_cmd->add_option("--split", train_args.split_fraction,
                        "train fraction; 0 trains on everything");
  train_cmd->add_option("--out-train", train_args.out_train,
                        "write the training split here (needs --split)");
  train_cmd->add_option("--out-test", train_args.out_test,
                        "write the held-out split here (needs --split)");
  train_cmd->add_option("--seed", train_args.seed, "rng seed");
  train_cmd->add_option("--out", train_args.out, "model JSON")->required();
  train_cmd->add_option("--mlp-widths", train_args.mlp_widths,
                        "comma-separated layer widths, last must be 1");
  train_cmd->add_option("--mlp-epochs", train_args.cfg.mlp.epochs, "training epochs");
  train_cmd->add_option("--mlp-batch", train_args.cfg.mlp.batch_size, "minibatch size");
  train_cmd->add_option("--mlp-lr", train_args.cfg.mlp.learning_rate, "learning rate");
  train_cmd->add_option("--lr-iterations", train_args.cfg.lr_iterations,
                        "gradient steps");
  train_cmd->add_option("--lr-learning-rate", train_args.cfg.lr_learning_rate,
                        "");
  train_cmd->add_option("--svm-epochs", train_args.cfg.svm_epochs, "training epochs");
  train_cmd->add_option("--svm-learning-rate",
                        train_args.cfg.svm_learning_rate, "");
  train_cmd->add_option("--svm-l2", train_args.cfg.svm_l2, "L2 penalty");
  train_cmd->add_option("--tree-max-depth", train_args.cfg.tree_max_depth,
                        "maximum split depth");
  train_cmd->add_option("--tree-min-leaf", train_args.cfg.tree_min_leaf,
                        "minimum rows per leaf");
  train_cmd->callback([&] {
    set_thread_cap(threads);
    run_train(train_args);
  });

  SeedsArgs seeds_args;
  CLI::App* seeds_cmd =
      app.add_subcommand("seeds", "pick starting instances for generation");
  seeds_cmd->add_option("--schema", seeds_args.schema_path, "schema file")
      ->required();
  seeds_cmd->add_option("--data", seeds_args.data_path, "encoded CSV")
      ->required();
  seeds_cmd->add_option(
      "--protected", seeds_args.protected_csv,
      "protected attributes (default: schema flags; for iand, model flags)");
  seeds_cmd->add_option("--model", seeds_args.model_path,
                        "model JSON (required for iand)");
  seeds_cmd->add_option("--strategy", seeds_args.strategy,
                        "random | cluster | iand");
  seeds_cmd->add_option("--budget", seeds_args.budget, "seed count");
  seeds_cmd->add_option("--cluster-k", seeds_args.cluster_k,
                        "clusters for the cluster strategy");
  seeds_cmd->add_option("--eps", seeds_args.dbscan.eps, "DBSCAN radius");
  seeds_cmd->add_option("--min-pts", seeds_args.dbscan.min_pts,
                        "DBSCAN core threshold");
  seeds_cmd->add_option("--shap-mode", seeds_args.shap_mode,
                        "exact | sampled");
  seeds_cmd->add_option("--shap-coalitions", seeds_args.shap.n_coalitions,
                         "sampled-mode coalition draws");
  seeds_cmd->add_option("--shap-background", seeds_args.shap.background_rows,
                        "");
  seeds_cmd->add_option("--seed", seeds_args.seed, "rng seed");
  seeds_cmd->add_option("--out", seeds_args.out, "seed set JSON")->required();
  seeds_cmd->callback([&] {
    set_thread_cap(threads);
    if (parse_seed_strategy(seeds_args.strategy) == SeedStrategy::kIand &&
        seeds_args.model_path.empty())
      throw ConfigError("the iand strategy requires --model");
    run_seeds(seeds_args);
  });

  GenerateArgs gen_args;
  CLI::App* gen_cmd =
      app.add_subcommand("generate", "search for discriminatory instances");
  gen_cmd->add_option("--model", gen_args.model_path, "model JSON")->required();
  gen_cmd->add_option("--seeds", gen_args.seeds_path, "seed set JSON")
      ->required();
  gen_cmd->add_option("--protected", gen_args.protected_csv,
                      "protected attributes (default: model schema flags)");
  gen_cmd->add_option("--engine", gen_args.engine, "aequitas | adf");
  gen_cmd->add_option("--global-limit", gen_args.global_limit,
                      "global-phase evaluation budget");
  gen_cmd->add_option("--local-limit", gen_args.local_limit,
                      "local steps per discovered instance");
  gen_cmd->add_option("--seed", gen_args.seed, "rng seed");
  gen_cmd->add_option("--out", gen_args.out, "records JSONL")->required();
  gen_cmd->callback([&] {
    set_thread_cap(threads);
    run_generate(gen_args);
  });

  ExplainArgs explain_args;
  CLI::App* explain_cmd = app.add_subcommand(
      "explain", "per-attribute Shapley attributions for predictions");
  explain_cmd->add_option("--model", explain_args.model_path, "model JSON")
      ->required();
  explain_cmd
      ->add_option("--background", explain_args.background_path,
                   "encoded CSV summarized into the masking background")
      ->required();
  explain_cmd->add_option("--records", explain_args.records_path,
                          "explain instance/witness pairs from this JSONL");
  explain_cmd->add_option("--instances", explain_args.instances_path,
                          "explain rows of this encoded CSV");
  explain_cmd->add_option("--mode", explain_args.mode,
                          "exact | sampled (default: automatic)");
  explain_cmd->add_option("--coalitions", explain_args.coalitions,
                          "sampled-mode coalition budget");
  explain_cmd->add_option("--background-rows", explain_args.background_rows,
                          "background medoid count");
  explain_cmd->add_option("--limit", explain_args.limit,
                          "explain at most this many entries (0 = all)");
  explain_cmd->add_option("--seed", explain_args.seed, "rng seed");
  explain_cmd->add_option("--out", explain_args.out, "report JSON")->required();
  explain_cmd->callback([&] {
    set_thread_cap(threads);
    run_explain(explain_args);
  });

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "head-to-head retraining comparison of two configurations");
  eval_cmd->add_option("--schema", eval_args.schema_path, "schema file")
      ->required();
  eval_cmd->add_option("--data", eval_args.data_path, "encoded CSV")
      ->required();
  eval_cmd->add_option("--protected", eval_args.protected_csv,
                       "protected attributes (overrides schema flags)");
  eval_cmd->add_option("--config-a", eval_args.config_a, "strategy+engine");
  eval_cmd->add_option("--config-b", eval_args.config_b, "strategy+engine");
  eval_cmd->add_option("--model", eval_args.model, "model kind to test");
  eval_cmd->add_option("--seed-limit", eval_args.budget.seed_limit,
                       "seed instances per arm");
  eval_cmd->add_option("--global-limit", eval_args.budget.global_limit,
                       "global-phase probes");
  eval_cmd->add_option("--local-limit", eval_args.budget.local_limit,
                       "local probes per discovery");
  eval_cmd->add_option("--epochs", eval_args.epochs, "retraining epochs");
  eval_cmd->add_flag("--from-scratch", eval_args.from_scratch,
                     "retrain from scratch instead of continuing");
  eval_cmd->add_option("--seed", eval_args.seed, "rng seed");
  eval_cmd->add_option("--out", eval_args.out, "result JSON")->required();
  eval_cmd->add_option("--csv", eval_args.csv_out, "also write a CSV row");
  eval_cmd->add_option("--label", eval_args.label, "label for the CSV row");
  eval_cmd->callback([&] {
    set_thread_cap(threads);
    run_eval(eval_args);
  });

  CompareArgs compare_args;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "mean IDI yield of several configurations over trials");
  compare_cmd->add_option("--schema", compare_args.schema_path, "schema file")
      ->required();
  compare_cmd->add_option("--data", compare_args.data_path, "encoded CSV")
      ->required();
  compare_cmd->add_option("--protected", compare_args.protected_csv,
                          "protected attributes (overrides schema flags)");
  compare_cmd->add_option("--configs", compare_args.configs,
                          "comma-separated strategy+engine list");
  compare_cmd->add_option("--model", compare_args.model, "model kind to test");
  compare_cmd->add_option("--seed-limit", compare_args.budget.seed_limit,
                          "seed instances per config");
  compare_cmd->add_option("--global-limit", compare_args.budget.global_limit,
                          "global-phase probes");
  compare_cmd->add_option("--local-limit", compare_args.budget.local_limit,
                          "local probes per discovery");
  compare_cmd->add_option("--trials", compare_args.trials, "trials per config");
  compare_cmd->add_flag("--timings", compare_args.timings,
                        "include wall-time columns");
  compare_cmd->add_option("--seed", compare_args.seed, "rng seed");
  compare_cmd->add_option("--out", compare_args.out, "comparison CSV")
      ->required();
  compare_cmd->callback([&] {
    set_thread_cap(threads);
    run_compare(compare_args);
  });

  RunArgs run_args;
  CLI::App* run_cmd =
      app.add_subcommand("run", "full campaign from a config file");
  run_cmd->add_option("--config", run_args.config_path, "key = value config")
      ->required();
  run_cmd->add_option("--out", run_args.out, "report JSON")->required();
  run_cmd->add_option("--csv", run_args.csv_out, "also write the CSV report");
  run_cmd->callback([&] {
    set_thread_cap(threads);
    run_run(run_args);
  });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
