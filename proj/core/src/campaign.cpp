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

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>

#include "fairlens/dataset_io.hpp"
#include "fairlens/discrimination.hpp"
#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"
#include "fairlens/shap.hpp"
#include "fairlens/version.hpp"
#include "nlohmann/json.hpp"

namespace fairlens {
namespace {

using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Rethrows any pipeline error with the failing phase prepended.
template <typename Fn>
auto run_phase(const std::string& tag, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(tag + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(tag + ": " + e.what());
  } catch (const ComputeError& e) {
    throw ComputeError(tag + ": " + e.what());
  }
}

// --- plain-text config format ---------------------------------------------

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

long long parse_int(const std::string& key, const std::string& value) {
  long long out = 0;
  auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError("key '" + key + "': expected an integer, got '" + value +
                      "'");
  return out;
}

uint64_t parse_uint64(const std::string& key, const std::string& value) {
  uint64_t out = 0;
  auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError("key '" + key +
                      "': expected an unsigned integer, got '" + value + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t idx = 0;
    double out = std::stod(value, &idx);
    if (idx != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + value +
                      "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" +
                    value + "'");
}

std::vector<int> parse_int_list(const std::string& key,
                                const std::string& value) {
  std::vector<int> out;
  for (const std::string& item : split_csv(value))
    out.push_back(static_cast<int>(parse_int(key, item)));
  return out;
}

// Shortest representation that parses back to the identical double.
std::string double_to_text(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string join_csv(const std::vector<std::string>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += items[i];
  }
  return out;
}

std::string join_int_csv(const std::vector<int>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(items[i]);
  }
  return out;
}

// --- JSON helpers ----------------------------------------------------------

ordered_json config_to_json(const CampaignConfig& c) {
  ordered_json j;
  j["dataset"] = c.dataset_path;
  j["schema"] = c.schema_path;
  j["protected"] = c.protected_attrs;
  j["model"] = model_kind_name(c.model);
  ordered_json t;
  t["lr_iterations"] = c.train.lr_iterations;
  t["lr_learning_rate"] = c.train.lr_learning_rate;
  t["svm_epochs"] = c.train.svm_epochs;
  t["svm_learning_rate"] = c.train.svm_learning_rate;
  t["svm_l2"] = c.train.svm_l2;
  t["tree_max_depth"] = c.train.tree_max_depth;
  t["tree_min_leaf"] = c.train.tree_min_leaf;
  t["mlp_widths"] = c.train.mlp.layer_widths;
  t["mlp_epochs"] = c.train.mlp.epochs;
  t["mlp_batch_size"] = c.train.mlp.batch_size;
  t["mlp_learning_rate"] = c.train.mlp.learning_rate;
  j["train"] = std::move(t);
  j["strategy"] = seed_strategy_name(c.strategy);
  j["engine"] = std::string(engine_name(c.engine));
  j["seed_limit"] = c.budget.seed_limit;
  j["global_limit"] = c.budget.global_limit;
  j["local_limit"] = c.budget.local_limit;
  j["cluster_k"] = c.cluster_k;
  j["dbscan_eps"] = c.dbscan.eps;
  j["dbscan_min_pts"] = c.dbscan.min_pts;
  j["shap_mode"] = shap_mode_name(c.shap.mode);
  j["shap_coalitions"] = c.shap.n_coalitions;
  j["shap_background"] = c.shap.background_rows;
  j["trials"] = c.trials;
  j["rng_seed"] = c.rng_seed;
  j["retrain_epochs"] = c.retrain_epochs;
  j["from_scratch"] = c.from_scratch;
  return j;
}

CampaignConfig config_from_json(const ordered_json& j) {
  CampaignConfig c;
  c.dataset_path = j.at("dataset").get<std::string>();
  c.schema_path = j.at("schema").get<std::string>();
  c.protected_attrs = j.at("protected").get<std::vector<std::string>>();
  c.model = parse_model_kind(j.at("model").get<std::string>());
  const ordered_json& t = j.at("train");
  c.train.lr_iterations = t.at("lr_iterations").get<int>();
  c.train.lr_learning_rate = t.at("lr_learning_rate").get<double>();
  c.train.svm_epochs = t.at("svm_epochs").get<int>();
  c.train.svm_learning_rate = t.at("svm_learning_rate").get<double>();
  c.train.svm_l2 = t.at("svm_l2").get<double>();
  c.train.tree_max_depth = t.at("tree_max_depth").get<int>();
  c.train.tree_min_leaf = t.at("tree_min_leaf").get<int>();
  c.train.mlp.layer_widths = t.at("mlp_widths").get<std::vector<int>>();
  c.train.mlp.epochs = t.at("mlp_epochs").get<int>();
  c.train.mlp.batch_size = t.at("mlp_batch_size").get<int>();
  c.train.mlp.learning_rate = t.at("mlp_learning_rate").get<double>();
  c.strategy = parse_seed_strategy(j.at("strategy").get<std::string>());
  c.engine = parse_engine(j.at("engine").get<std::string>());
  c.budget.seed_limit = j.at("seed_limit").get<int>();
  c.budget.global_limit = j.at("global_limit").get<int>();
  c.budget.local_limit = j.at("local_limit").get<int>();
  c.cluster_k = j.at("cluster_k").get<int>();
  c.dbscan.eps = j.at("dbscan_eps").get<double>();
  c.dbscan.min_pts = j.at("dbscan_min_pts").get<int>();
  c.shap.mode = parse_shap_mode(j.at("shap_mode").get<std::string>());
  c.shap.n_coalitions = j.at("shap_coalitions").get<int>();
  c.shap.background_rows = j.at("shap_background").get<int>();
  c.trials = j.at("trials").get<int>();
  c.rng_seed = j.at("rng_seed").get<uint64_t>();
  c.retrain_epochs = j.at("retrain_epochs").get<int>();
  c.from_scratch = j.at("from_scratch").get<bool>();
  return c;
}

ordered_json trial_to_json(const CampaignTrial& t, int index) {
  ordered_json j;
  j["trial"] = index;
  j["seed_idis"] = t.seed_idis;
  j["seed_rate"] = t.seed_rate;
  j["global_idis"] = t.global_idis;
  j["local_idis"] = t.local_idis;
  j["total_idis"] = t.total_idis;
  j["explored"] = t.explored;
  j["gen_rate"] = t.gen_rate;
  j["remaining_before"] = t.remaining_before;
  j["remaining_after"] = t.remaining_after;
  j["f1_after"] = t.f1_after;
  return j;
}

ordered_json summary_to_json(const CampaignSummary& s) {
  ordered_json j;
  j["seed_idis"] = s.seed_idis;
  j["seed_rate"] = s.seed_rate;
  j["global_idis"] = s.global_idis;
  j["local_idis"] = s.local_idis;
  j["total_idis"] = s.total_idis;
  j["explored"] = s.explored;
  j["gen_rate"] = s.gen_rate;
  j["remaining_before"] = s.remaining_before;
  j["remaining_after"] = s.remaining_after;
  j["f1_after"] = s.f1_after;
  return j;
}

}  // namespace

CampaignConfig parse_campaign_config(const std::string& text) {
  CampaignConfig c;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (size_t hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": missing key");

    if (key == "dataset") {
      c.dataset_path = value;
    } else if (key == "schema") {
      c.schema_path = value;
    } else if (key == "protected") {
      c.protected_attrs = split_csv(value);
    } else if (key == "model") {
      c.model = parse_model_kind(value);
    } else if (key == "strategy") {
      c.strategy = parse_seed_strategy(value);
    } else if (key == "engine") {
      c.engine = parse_engine(value);
    } else if (key == "seed_limit") {
      c.budget.seed_limit = static_cast<int>(parse_int(key, value));
    } else if (key == "global_limit") {
      c.budget.global_limit = static_cast<int>(parse_int(key, value));
    } else if (key == "local_limit") {
      c.budget.local_limit = static_cast<int>(parse_int(key, value));
    } else if (key == "cluster_k") {
      c.cluster_k = static_cast<int>(parse_int(key, value));
    } else if (key == "dbscan_eps") {
      c.dbscan.eps = parse_double(key, value);
    } else if (key == "dbscan_min_pts") {
      c.dbscan.min_pts = static_cast<int>(parse_int(key, value));
    } else if (key == "shap_mode") {
      c.shap.mode = parse_shap_mode(value);
    } else if (key == "shap_coalitions") {
      c.shap.n_coalitions = static_cast<int>(parse_int(key, value));
    } else if (key == "shap_background") {
      c.shap.background_rows = static_cast<int>(parse_int(key, value));
    } else if (key == "trials") {
      c.trials = static_cast<int>(parse_int(key, value));
    } else if (key == "rng_seed") {
      c.rng_seed = parse_uint64(key, value);
    } else if (key == "retrain_epochs") {
      c.retrain_epochs = static_cast<int>(parse_int(key, value));
    } else if (key == "from_scratch") {
      c.from_scratch = parse_bool(key, value);
    } else if (key == "lr_iterations") {
      c.train.lr_iterations = static_cast<int>(parse_int(key, value));
    } else if (key == "lr_learning_rate") {
      c.train.lr_learning_rate = parse_double(key, value);
    } else if (key == "svm_epochs") {
      c.train.svm_epochs = static_cast<int>(parse_int(key, value));
    } else if (key == "svm_learning_rate") {
      c.train.svm_learning_rate = parse_double(key, value);
    } else if (key == "svm_l2") {
      c.train.svm_l2 = parse_double(key, value);
    } else if (key == "tree_max_depth") {
      c.train.tree_max_depth = static_cast<int>(parse_int(key, value));
    } else if (key == "tree_min_leaf") {
      c.train.tree_min_leaf = static_cast<int>(parse_int(key, value));
    } else if (key == "mlp_widths") {
      c.train.mlp.layer_widths = parse_int_list(key, value);
    } else if (key == "mlp_epochs") {
      c.train.mlp.epochs = static_cast<int>(parse_int(key, value));
    } else if (key == "mlp_batch_size") {
      c.train.mlp.batch_size = static_cast<int>(parse_int(key, value));
    } else if (key == "mlp_learning_rate") {
      c.train.mlp.learning_rate = parse_double(key, value);
    } else {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    }
  }
  return c;
}

CampaignConfig load_campaign_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_campaign_config(buffer.str());
}

std::string campaign_config_to_text(const CampaignConfig& c) {
  std::string out;
  auto kv = [&out](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  kv("dataset", c.dataset_path);
  kv("schema", c.schema_path);
  kv("protected", join_csv(c.protected_attrs));
  kv("model", model_kind_name(c.model));
  kv("strategy", seed_strategy_name(c.strategy));
  kv("engine", std::string(engine_name(c.engine)));
  kv("seed_limit", std::to_string(c.budget.seed_limit));
  kv("global_limit", std::to_string(c.budget.global_limit));
  kv("local_limit", std::to_string(c.budget.local_limit));
  kv("cluster_k", std::to_string(c.cluster_k));
  kv("dbscan_eps", double_to_text(c.dbscan.eps));
  kv("dbscan_min_pts", std::to_string(c.dbscan.min_pts));
  kv("shap_mode", shap_mode_name(c.shap.mode));
  kv("shap_coalitions", std::to_string(c.shap.n_coalitions));
  kv("shap_background", std::to_string(c.shap.background_rows));
  kv("trials", std::to_string(c.trials));
  kv("rng_seed", std::to_string(c.rng_seed));
  kv("retrain_epochs", std::to_string(c.retrain_epochs));
  kv("from_scratch", c.from_scratch ? "true" : "false");
  kv("lr_iterations", std::to_string(c.train.lr_iterations));
  kv("lr_learning_rate", double_to_text(c.train.lr_learning_rate));
  kv("svm_epochs", std::to_string(c.train.svm_epochs));
  kv("svm_learning_rate", double_to_text(c.train.svm_learning_rate));
  kv("svm_l2", double_to_text(c.train.svm_l2));
  kv("tree_max_depth", std::to_string(c.train.tree_max_depth));
  kv("tree_min_leaf", std::to_string(c.train.tree_min_leaf));
  kv("mlp_widths", join_int_csv(c.train.mlp.layer_widths));
  kv("mlp_epochs", std::to_string(c.train.mlp.epochs));
  kv("mlp_batch_size", std::to_string(c.train.mlp.batch_size));
  kv("mlp_learning_rate", double_to_text(c.train.mlp.learning_rate));
  return out;
}

void validate_campaign_config(const CampaignConfig& c) {
  validate_budget(c.budget);
  if (c.trials < 1) throw ConfigError("trials must be at least 1");
  if (c.retrain_epochs < 0)
    throw ConfigError("retrain_epochs must not be negative");
  if (c.cluster_k < 1) throw ConfigError("cluster_k must be at least 1");
  if (!(c.dbscan.eps > 0.0)) throw ConfigError("dbscan_eps must be positive");
  if (c.dbscan.min_pts < 1)
    throw ConfigError("dbscan_min_pts must be at least 1");
  if (c.shap.n_coalitions < 1)
    throw ConfigError("shap_coalitions must be at least 1");
  if (c.shap.background_rows < 1)
    throw ConfigError("shap_background must be at least 1");
}

Dataset select_protected(const Dataset& ds,
                         const std::vector<std::string>& names) {
  if (names.empty()) return ds;
  Dataset out = ds;
  std::unordered_set<std::string> wanted(names.begin(), names.end());
  for (const std::string& name : names) {
    bool found = false;
    for (const AttributeSpec& attr : out.schema.attributes)
      if (attr.name == name) found = true;
    if (!found)
      throw ConfigError("protected attribute '" + name +
                        "' is not in the schema");
  }
  for (AttributeSpec& attr : out.schema.attributes)
    attr.is_protected = wanted.count(attr.name) > 0;
  return out;
}

CampaignReport run_campaign(const CampaignConfig& config) {
  DatasetSchema schema = run_phase("load", [&] {
    return load_schema(config.schema_path);
  });
  Dataset ds = run_phase("load", [&] {
    return load_csv(config.dataset_path, schema);
  });
  return run_campaign(config, ds);
}

CampaignReport run_campaign(const CampaignConfig& config, const Dataset& ds) {
  validate_campaign_config(config);
  const auto campaign_start = Clock::now();
  const uint64_t S = config.rng_seed;

  Dataset selected = run_phase("select-protected", [&] {
    return select_protected(ds, config.protected_attrs);
  });
  std::vector<std::string> prot;
  for (int p : selected.schema.protected_indices())
    prot.push_back(selected.schema.attributes[static_cast<size_t>(p)].name);
  if (prot.empty())
    throw ConfigError(
        "select-protected: no protected attributes (set 'protected' in the "
        "config or flag attributes in the schema)");

  CampaignReport report;
  report.version = kToolVersion;
  report.config = config;
  char fp[17];
  std::snprintf(fp, sizeof(fp), "%016llx",
                static_cast<unsigned long long>(selected.schema.fingerprint()));
  report.schema_fingerprint = fp;

  auto [train_split, test_split] =
      split(selected, 0.6, derive_seed(S, "campaign/split"));

  const auto train_start = Clock::now();
  TrainedModel original = run_phase("train", [&] {
    return train(config.model, train_split, config.train,
                 derive_seed(S, "campaign/train"));
  });
  report.train_wall = seconds_since(train_start);
  report.f1_before = f1_score(original, test_split);

  const auto oracle_start = Clock::now();
  const ModelKind oracle_kinds[] = {ModelKind::kLogistic, ModelKind::kSvm,
                                    ModelKind::kTree, ModelKind::kMlp};
  std::vector<TrainedModel> oracles;
  oracles.reserve(4);
  for (int k = 0; k < 4; ++k) {
    oracles.push_back(run_phase("oracle", [&] {
      return train(oracle_kinds[k], train_split, config.train,
                   derive_seed(S, "campaign/oracle", static_cast<uint64_t>(k)));
    }));
  }
  std::vector<const TrainedModel*> oracle_ptrs;
  for (const TrainedModel& o : oracles) oracle_ptrs.push_back(&o);
  report.oracle_wall = seconds_since(oracle_start);

  const long long cap =
      std::max<long long>(witness_product_size(selected.schema, prot), 1);

  for (int t = 0; t < config.trials; ++t) {
    CampaignTrial trial;
    const auto ti = static_cast<uint64_t>(t);

    const auto seed_start = Clock::now();
    SeedSet seeds = run_phase("seeds", [&] {
      const uint64_t s = derive_seed(S, "campaign/seeds", ti);
      switch (config.strategy) {
        case SeedStrategy::kRandom:
          return seed_random(train_split, config.budget.seed_limit, s);
        case SeedStrategy::kCluster:
          return seed_cluster(train_split, config.budget.seed_limit,
                              config.cluster_k, s);
        case SeedStrategy::kIand:
          return seed_iand(original, train_split, config.budget.seed_limit,
                           config.dbscan, config.shap, s);
      }
      throw ConfigError("unknown seeding strategy");
    });
    trial.seed_wall = seconds_since(seed_start);

    IdiRateResult seed_metrics = run_phase("seeds", [&] {
      return idi_rate(original, seeds.seeds, prot, cap);
    });
    trial.seed_idis = static_cast<long long>(seed_metrics.records.size());
    trial.seed_rate = seed_metrics.rate;

    const auto gen_start = Clock::now();
    GenResult gen = run_phase("generate", [&] {
      return generate(config.engine, original, seeds, prot, config.budget,
                      derive_seed(S, "campaign/gen", ti));
    });
    trial.gen_wall = seconds_since(gen_start);
    trial.global_idis = gen.global_count;
    trial.local_idis = gen.local_count;
    trial.explored = gen.explored;

    // Every discriminatory instance the trial surfaced, across the seeding
    // and generation phases, deduplicated by value vector.
    std::vector<IdiRecord> discovered;
    std::unordered_set<Instance, InstanceHash> seen;
    for (const std::vector<IdiRecord>* source :
         {&seed_metrics.records, &gen.idis})
      for (const IdiRecord& rec : *source)
        if (seen.insert(rec.instance).second) discovered.push_back(rec);
    trial.total_idis = static_cast<long long>(discovered.size());
    trial.gen_rate =
        gen.explored > 0
            ? static_cast<double>(gen.idis.size()) / gen.explored
            : 0.0;

    const auto retrain_start = Clock::now();
    TrainedModel retrained = run_phase("retrain", [&] {
      Dataset labeled = label_idis(discovered, oracle_ptrs, original);
      return retrain(original, train_split, labeled, config.retrain_epochs,
                     derive_seed(S, "campaign/retrain", ti),
                     config.from_scratch);
    });
    trial.retrain_wall = seconds_since(retrain_start);

    std::vector<Instance> cases;
    cases.reserve(discovered.size());
    for (const IdiRecord& rec : discovered) cases.push_back(rec.instance);
    trial.remaining_before = run_phase("measure", [&] {
      return measure_remaining(original, cases, prot);
    });
    trial.remaining_after = run_phase("measure", [&] {
      return measure_remaining(retrained, cases, prot);
    });
    trial.f1_after = f1_score(retrained, test_split);

    report.trials.push_back(trial);
  }

  CampaignSummary& s = report.summary;
  const double n = static_cast<double>(report.trials.size());
  for (const CampaignTrial& t : report.trials) {
    s.seed_idis += t.seed_idis / n;
    s.seed_rate += t.seed_rate / n;
    s.global_idis += t.global_idis / n;
    s.local_idis += t.local_idis / n;
    s.total_idis += t.total_idis / n;
    s.explored += t.explored / n;
    s.gen_rate += t.gen_rate / n;
    s.remaining_before += t.remaining_before / n;
    s.remaining_after += t.remaining_after / n;
    s.f1_after += t.f1_after / n;
  }
  report.total_wall = seconds_since(campaign_start);
  return report;
}

std::string report_to_json(const CampaignReport& report,
                           bool include_timings) {
  ordered_json j;
  j["fairlens_version"] = report.version;
  j["config"] = config_to_json(report.config);
  j["schema_fingerprint"] = report.schema_fingerprint;
  j["f1_before"] = report.f1_before;
  ordered_json trials = ordered_json::array();
  for (size_t i = 0; i < report.trials.size(); ++i)
    trials.push_back(trial_to_json(report.trials[i], static_cast<int>(i)));
  j["trials"] = std::move(trials);
  j["summary"] = summary_to_json(report.summary);
  if (include_timings) {
    ordered_json timings;
    timings["train_s"] = report.train_wall;
    timings["oracle_s"] = report.oracle_wall;
    ordered_json per_trial = ordered_json::array();
    for (const CampaignTrial& t : report.trials) {
      ordered_json row;
      row["seed_s"] = t.seed_wall;
      row["gen_s"] = t.gen_wall;
      row["retrain_s"] = t.retrain_wall;
      per_trial.push_back(std::move(row));
    }
    timings["per_trial"] = std::move(per_trial);
    timings["total_s"] = report.total_wall;
    j["timings"] = std::move(timings);
  }
  return j.dump(2) + "\n";
}

CampaignReport report_from_json(const std::string& text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    CampaignReport r;
    r.version = j.at("fairlens_version").get<std::string>();
    r.config = config_from_json(j.at("config"));
    r.schema_fingerprint = j.at("schema_fingerprint").get<std::string>();
    r.f1_before = j.at("f1_before").get<double>();
    for (const ordered_json& tj : j.at("trials")) {
      CampaignTrial t;
      t.seed_idis = tj.at("seed_idis").get<long long>();
      t.seed_rate = tj.at("seed_rate").get<double>();
      t.global_idis = tj.at("global_idis").get<long long>();
      t.local_idis = tj.at("local_idis").get<long long>();
      t.total_idis = tj.at("total_idis").get<long long>();
      t.explored = tj.at("explored").get<long long>();
      t.gen_rate = tj.at("gen_rate").get<double>();
      t.remaining_before = tj.at("remaining_before").get<long long>();
      t.remaining_after = tj.at("remaining_after").get<long long>();
      t.f1_after = tj.at("f1_after").get<double>();
      r.trials.push_back(t);
    }
    const ordered_json& sj = j.at("summary");
    r.summary.seed_idis = sj.at("seed_idis").get<double>();
    r.summary.seed_rate = sj.at("seed_rate").get<double>();
    r.summary.global_idis = sj.at("global_idis").get<double>();
    r.summary.local_idis = sj.at("local_idis").get<double>();
    r.summary.total_idis = sj.at("total_idis").get<double>();
    r.summary.explored = sj.at("explored").get<double>();
    r.summary.gen_rate = sj.at("gen_rate").get<double>();
    r.summary.remaining_before = sj.at("remaining_before").get<double>();
    r.summary.remaining_after = sj.at("remaining_after").get<double>();
    r.summary.f1_after = sj.at("f1_after").get<double>();
    if (j.contains("timings")) {
      const ordered_json& tg = j.at("timings");
      r.train_wall = tg.at("train_s").get<double>();
      r.oracle_wall = tg.at("oracle_s").get<double>();
      r.total_wall = tg.at("total_s").get<double>();
      const ordered_json& per_trial = tg.at("per_trial");
      for (size_t i = 0; i < r.trials.size() && i < per_trial.size(); ++i) {
        r.trials[i].seed_wall = per_trial[i].at("seed_s").get<double>();
        r.trials[i].gen_wall = per_trial[i].at("gen_s").get<double>();
        r.trials[i].retrain_wall = per_trial[i].at("retrain_s").get<double>();
      }
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed campaign report JSON: ") +
                    e.what());
  }
}

std::string report_to_csv(const CampaignReport& report, bool include_timings) {
  std::string out =
      "trial,seed_idis,seed_rate,global_idis,local_idis,total_idis,explored,"
      "gen_rate,remaining_before,remaining_after,f1_before,f1_after";
  if (include_timings) out += ",seed_wall_s,gen_wall_s,retrain_wall_s";
  out += "\n";
  char buf[512];
  for (size_t i = 0; i < report.trials.size(); ++i) {
    const CampaignTrial& t = report.trials[i];
    std::snprintf(buf, sizeof(buf),
                  "%zu,%lld,%.6f,%lld,%lld,%lld,%lld,%.6f,%lld,%lld,%.6f,%.6f",
                  i, t.seed_idis, t.seed_rate, t.global_idis, t.local_idis,
                  t.total_idis, t.explored, t.gen_rate, t.remaining_before,
                  t.remaining_after, report.f1_before, t.f1_after);
    out += buf;
    if (include_timings) {
      std::snprintf(buf, sizeof(buf), ",%.3f,%.3f,%.3f", t.seed_wall,
                    t.gen_wall, t.retrain_wall);
      out += buf;
    }
    out += "\n";
  }
  const CampaignSummary& s = report.summary;
  std::snprintf(buf, sizeof(buf),
                "mean,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f",
                s.seed_idis, s.seed_rate, s.global_idis, s.local_idis,
                s.total_idis, s.explored, s.gen_rate, s.remaining_before,
                s.remaining_after, report.f1_before, s.f1_after);
  out += buf;
  if (include_timings) {
    double seed_s = 0.0, gen_s = 0.0, retrain_s = 0.0;
    const double n = std::max<double>(1.0, report.trials.size());
    for (const CampaignTrial& t : report.trials) {
      seed_s += t.seed_wall / n;
      gen_s += t.gen_wall / n;
      retrain_s += t.retrain_wall / n;
    }
    std::snprintf(buf, sizeof(buf), ",%.3f,%.3f,%.3f", seed_s, gen_s,
                  retrain_s);
    out += buf;
  }
  out += "\n";
  return out;
}

void emit_report(const CampaignReport& report, ReportFormat format,
                 const std::string& path) {
  const std::string text = format == ReportFormat::kJson
                               ? report_to_json(report)
                               : report_to_csv(report);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write report to '" + path + "'");
  out << text;
  if (!out) throw DataError("error while writing report to '" + path + "'");
}

}  // namespace fairlens
