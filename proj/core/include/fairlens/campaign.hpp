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

#ifndef FAIRLENS_CAMPAIGN_HPP_
#define FAIRLENS_CAMPAIGN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fairlens/dataset.hpp"
#include "fairlens/evalharness.hpp"
#include "fairlens/generation.hpp"
#include "fairlens/model.hpp"
#include "fairlens/seeding.hpp"

namespace fairlens {

// Everything needed to reproduce a full pipeline run: data locations, the
// model under test, seeding and generation settings, and the master RNG
// seed every phase stream derives from.
struct CampaignConfig {
  std::string dataset_path;
  std::string schema_path;
  // Attributes treated as protected for this run; the selection overrides
  // the schema's own flags. Empty means "use the schema flags as shipped".
  std::vector<std::string> protected_attrs;

  ModelKind model = ModelKind::kMlp;
  TrainConfig train;

  SeedStrategy strategy = SeedStrategy::kIand;
  GenEngine engine = GenEngine::kAequitas;
  GenBudget budget;  // seed / global / local limits, default 100 each

  int cluster_k = kDefaultClusterK;  // cluster seeding only
  DbscanParams dbscan;               // iand seeding only
  SeedShapConfig shap;               // iand seeding only

  int trials = 1;
  uint64_t rng_seed = 42;
  int retrain_epochs = 10;
  bool from_scratch = false;

  bool operator==(const CampaignConfig&) const = default;
};

// Plain-text key = value configuration format ('#' starts a comment).
// Unknown keys and malformed values raise ConfigError. Keys mirror the
// CampaignConfig fields; campaign_config_to_text writes a file that parses
// back to the identical configuration.
CampaignConfig parse_campaign_config(const std::string& text);
CampaignConfig load_campaign_config(const std::string& path);
std::string campaign_config_to_text(const CampaignConfig& config);

// Raises ConfigError on out-of-range fields (trials < 1, bad budget, ...).
void validate_campaign_config(const CampaignConfig& config);

// Returns a copy of ds whose schema marks exactly `names` as protected.
// Unknown names raise ConfigError; an empty list returns ds unchanged.
[[nodiscard]] Dataset select_protected(const Dataset& ds,
                                       const std::vector<std::string>& names);

// Counts and rates for one trial. Wall-clock fields are carried separately
// from the deterministic counts and are excluded from canonical output.
struct CampaignTrial {
  long long seed_idis = 0;   // distinct discriminatory seeds
  double seed_rate = 0.0;    // fraction of seeds that are discriminatory
  long long global_idis = 0;
  long long local_idis = 0;
  long long total_idis = 0;  // distinct instances across all phases
  long long explored = 0;    // candidate evaluations spent
  double gen_rate = 0.0;     // total_idis / explored
  long long remaining_before = 0;
  long long remaining_after = 0;
  double f1_after = 0.0;

  double seed_wall = 0.0;     // seconds; timing, not part of canonical output
  double gen_wall = 0.0;
  double retrain_wall = 0.0;
};

// Per-field means over the trials.
struct CampaignSummary {
  double seed_idis = 0.0;
  double seed_rate = 0.0;
  double global_idis = 0.0;
  double local_idis = 0.0;
  double total_idis = 0.0;
  double explored = 0.0;
  double gen_rate = 0.0;
  double remaining_before = 0.0;
  double remaining_after = 0.0;
  double f1_after = 0.0;
};

struct CampaignReport {
  std::string version;          // tool version that produced the report
  CampaignConfig config;        // echo: sufficient to re-run the campaign
  std::string schema_fingerprint;  // hex fingerprint after protected selection
  double f1_before = 0.0;       // held-out F1 of the original model
  std::vector<CampaignTrial> trials;
  CampaignSummary summary;

  double train_wall = 0.0;   // seconds; timings are segregated on emission
  double oracle_wall = 0.0;
  double total_wall = 0.0;
};

// Runs the full pipeline: load → select protected → split → train →
// [per trial: seed → generate → label → retrain → measure]. All sub-seeds
// derive from config.rng_seed via documented (phase, trial) streams, so a
// config reproduces its report byte for byte apart from wall-clock fields.
// Any phase failure is rethrown with a phase-tagged message.
CampaignReport run_campaign(const CampaignConfig& config);
// Same pipeline on an already-loaded dataset (paths in config are echoed
// but not read).
CampaignReport run_campaign(const CampaignConfig& config, const Dataset& ds);

enum class ReportFormat { kJson, kCsv };

// Canonical machine format. With include_timings the wall-clock fields are
// appended under a single "timings" object; without it the output depends
// only on (config, master seed) and is byte-identical across runs.
std::string report_to_json(const CampaignReport& report,
                           bool include_timings = true);
CampaignReport report_from_json(const std::string& text);  // DataError

// One row per trial plus a trailing mean row, fixed documented header.
std::string report_to_csv(const CampaignReport& report,
                          bool include_timings = true);

// Writes the report to `path` in the requested format.
void emit_report(const CampaignReport& report, ReportFormat format,
                 const std::string& path);

}  // namespace fairlens

#endif  // FAIRLENS_CAMPAIGN_HPP_
