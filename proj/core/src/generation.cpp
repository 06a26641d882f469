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

#include "fairlens/generation.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <unordered_set>
#include <utility>

#include <Eigen/Core>

#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"

namespace fairlens {
namespace {

constexpr int kAdfGlobalSteps = 10;
constexpr double kAequitasIncrement = 0.001;

std::vector<size_t> resolved_protected(const DatasetSchema& schema,
                                       const std::vector<std::string>& names) {
  if (names.empty())
    throw ConfigError("generation requires at least one protected attribute");
  std::vector<size_t> indices;
  for (const std::string& name : names) {
    int idx = schema.attribute_index(name);
    if (idx < 0)
      throw ConfigError("unknown protected attribute '" + name + "'");
    indices.push_back(static_cast<size_t>(idx));
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return indices;
}

std::vector<size_t> non_protected_of(const DatasetSchema& schema,
                                     const std::vector<size_t>& prot) {
  std::vector<size_t> out;
  for (size_t i = 0; i < schema.attribute_count(); ++i)
    if (!std::binary_search(prot.begin(), prot.end(), i)) out.push_back(i);
  return out;
}

// Moves attribute `attr` of `x` by one domain step in direction `sign`,
// clamped to the attribute's domain.
Instance step_attribute(const DatasetSchema& schema, const Instance& x,
                        size_t attr, int sign) {
  const AttributeSpec& spec = schema.attributes[attr];
  int idx = spec.index_of(x.values[attr]);
  if (idx < 0) idx = 0;
  int next = std::clamp(idx + sign, 0, static_cast<int>(spec.domain_size()) - 1);
  Instance out = x;
  out.values[attr] = spec.domain[static_cast<size_t>(next)];
  return out;
}

// The protected-attribute variant of `x` with the largest probability gap
// to `x` itself; lexicographic enumeration order breaks ties. Returns
// nothing when every protected domain is a singleton.
std::optional<Instance> worst_case_variant(const TrainedModel& m,
                                           const Instance& x,
                                           const std::vector<size_t>& prot,
                                           long long cap) {
  const DatasetSchema& schema = m.schema();
  std::vector<Instance> variants;
  std::vector<size_t> cursor(prot.size(), 0);
  bool done = false;
  while (!done && static_cast<long long>(variants.size()) < cap) {
    Instance v = x;
    bool is_own = true;
    for (size_t k = 0; k < prot.size(); ++k) {
      const AttributeSpec& spec = schema.attributes[prot[k]];
      v.values[prot[k]] = spec.domain[cursor[k]];
      if (v.values[prot[k]] != x.values[prot[k]]) is_own = false;
    }
    if (!is_own) variants.push_back(std::move(v));
    // Advance the odometer; the last attribute varies fastest.
    size_t k = prot.size();
    while (k > 0) {
      --k;
      if (++cursor[k] < schema.attributes[prot[k]].domain_size()) break;
      cursor[k] = 0;
      if (k == 0) done = true;
    }
  }
  if (variants.empty()) return std::nullopt;
  const Eigen::VectorXd probs =
      m.predict_proba_scaled(scaled_rows(schema, variants));
  const double px = m.predict_proba(x);
  Eigen::Index best = 0;
  double best_gap = -1.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    double gap = std::abs(probs[i] - px);
    if (gap > best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return variants[static_cast<size_t>(best)];
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

struct SearchState {
  GenResult result;
  std::unordered_set<Instance, InstanceHash> recorded;
  std::vector<Instance> local_queue;  // global-phase IDIs, discovery order

  // Records an IDI if its instance is new; returns whether it was new.
  bool record(const IdiRecord& rec) {
    if (!recorded.insert(rec.instance).second) return false;
    result.idis.push_back(rec);
    return true;
  }
};

size_t pick_weighted(Rng& rng, const std::vector<double>& prob) {
  double u = rng.uniform_real();
  double cum = 0.0;
  for (size_t i = 0; i < prob.size(); ++i) {
    cum += prob[i];
    if (u < cum) return i;
  }
  return prob.size() - 1;
}

void renormalize(std::vector<double>& prob) {
  double sum = 0.0;
  for (double p : prob) sum += p;
  if (sum <= 0.0) return;
  for (double& p : prob) p /= sum;
}

void check_preconditions(const TrainedModel& m, const SeedSet& seeds,
                         const GenBudget& budget) {
  validate_budget(budget);
  if (seeds.seeds.empty())
    throw ConfigError("generation requires a non-empty seed set");
  for (const Instance& s : seeds.seeds)
    if (s.values.size() != m.schema().attribute_count())
      throw DataError("seed arity does not match the model schema");
}

void aequitas_local(const TrainedModel& m,
                    const std::vector<std::string>& prot_names,
                    const std::vector<size_t>& non_prot,
                    const GenBudget& budget, uint64_t rng_seed,
                    SearchState& st) {
  if (non_prot.empty()) return;
  const DatasetSchema& schema = m.schema();
  for (size_t qi = 0; qi < st.local_queue.size(); ++qi) {
    Rng rng(derive_seed(rng_seed, "gen/local", qi));
    std::vector<double> prob(non_prot.size(),
                             1.0 / static_cast<double>(non_prot.size()));
    Instance current = st.local_queue[qi];
    for (int step = 0; step < budget.local_limit; ++step) {
      size_t pick = pick_weighted(rng, prob);
      int sign = rng.bernoulli(0.5) ? 1 : -1;
      Instance cand = step_attribute(schema, current, non_prot[pick], sign);
      ++st.result.local_count;
      ++st.result.explored;
      auto rec = check_idi(m, cand, prot_names, kDefaultWitnessCap,
                           Provenance::kLocal);
      if (rec) {
        st.record(*rec);
        prob[pick] += kAequitasIncrement;
        renormalize(prob);
        current = std::move(cand);
      }
    }
  }
}

void adf_local(const TrainedModel& m,
               const std::vector<std::string>& prot_names,
               const std::vector<size_t>& prot,
               const std::vector<size_t>& non_prot, const GenBudget& budget,
               uint64_t rng_seed, SearchState& st) {
  if (non_prot.empty()) return;
  const DatasetSchema& schema = m.schema();
  for (size_t qi = 0; qi < st.local_queue.size(); ++qi) {
    Rng rng(derive_seed(rng_seed, "gen/local", qi));
    Instance current = st.local_queue[qi];
    for (int step = 0; step < budget.local_limit; ++step) {
      auto variant = worst_case_variant(m, current, prot, kDefaultWitnessCap);
      const Eigen::VectorXd g1 = m.input_gradient(current);
      const Eigen::VectorXd g2 =
          variant ? m.input_gradient(*variant) : g1;
      // Attributes with small mean absolute gradients barely move the
      // model's output, so stepping them tends to preserve the
      // discriminatory property; weight the choice by inverse saliency.
      std::vector<double> prob(non_prot.size());
      for (size_t k = 0; k < non_prot.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(non_prot[k]);
        prob[k] = 1.0 / (std::abs(g1[i]) + std::abs(g2[i]) + 1e-12);
      }
      renormalize(prob);
      size_t pick = non_prot[pick_weighted(rng, prob)];
      int sign = rng.bernoulli(0.5) ? 1 : -1;
      Instance cand = step_attribute(schema, current, pick, sign);
      ++st.result.local_count;
      ++st.result.explored;
      auto rec = check_idi(m, cand, prot_names, kDefaultWitnessCap,
                           Provenance::kLocal);
      if (rec) {
        st.record(*rec);
        current = std::move(cand);
      }
    }
  }
}

}  // namespace

std::string_view engine_name(GenEngine engine) {
  switch (engine) {
    case GenEngine::kAequitas:
      return "aequitas";
    case GenEngine::kAdf:
      return "adf";
  }
  throw ConfigError("unknown generation engine");
}

GenEngine parse_engine(std::string_view name) {
  if (name == "aequitas") return GenEngine::kAequitas;
  if (name == "adf") return GenEngine::kAdf;
  throw ConfigError("unknown generation engine '" + std::string(name) + "'");
}

void validate_budget(const GenBudget& budget) {
  if (budget.seed_limit < 1)
    throw ConfigError("seed limit must be at least 1");
  if (budget.global_limit < 1)
    throw ConfigError("global generation limit must be at least 1");
  if (budget.local_limit < 0)
    throw ConfigError("local generation limit must not be negative");
  if (budget.seed_limit > budget.global_limit)
    throw ConfigError(
        "seed limit must not exceed the global generation limit");
}

GenResult generate_aequitas(const TrainedModel& m, const SeedSet& seeds,
                            const std::vector<std::string>& protected_attrs,
                            const GenBudget& budget, uint64_t rng_seed) {
  const auto start = std::chrono::steady_clock::now();
  check_preconditions(m, seeds, budget);
  const std::vector<size_t> prot =
      resolved_protected(m.schema(), protected_attrs);
  const std::vector<size_t> non_prot = non_protected_of(m.schema(), prot);

  SearchState st;
  for (const Instance& seed : seeds.seeds) {
    if (st.result.global_count >= budget.global_limit) break;
    ++st.result.global_count;
    ++st.result.explored;
    auto rec = check_idi(m, seed, protected_attrs, kDefaultWitnessCap,
                         Provenance::kGlobal);
    if (rec && st.record(*rec)) st.local_queue.push_back(rec->instance);
  }
  aequitas_local(m, protected_attrs, non_prot, budget, rng_seed, st);

  st.result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return st.result;
}

GenResult generate_adf(const TrainedModel& m, const SeedSet& seeds,
                       const std::vector<std::string>& protected_attrs,
                       const GenBudget& budget, uint64_t rng_seed) {
  const auto start = std::chrono::steady_clock::now();
  if (m.kind() != ModelKind::kMlp)
    throw ConfigError("the adf engine requires a differentiable model");
  check_preconditions(m, seeds, budget);
  const std::vector<size_t> prot =
      resolved_protected(m.schema(), protected_attrs);
  const std::vector<size_t> non_prot = non_protected_of(m.schema(), prot);
  const DatasetSchema& schema = m.schema();

  SearchState st;
  for (const Instance& seed : seeds.seeds) {
    if (st.result.global_count >= budget.global_limit) break;
    Instance x = seed;
    for (int step = 0; step < kAdfGlobalSteps &&
                       st.result.global_count < budget.global_limit;
         ++step) {
      ++st.result.global_count;
      ++st.result.explored;
      auto rec = check_idi(m, x, protected_attrs, kDefaultWitnessCap,
                           Provenance::kGlobal);
      if (rec) {
        if (st.record(*rec)) st.local_queue.push_back(rec->instance);
        break;
      }
      auto variant = worst_case_variant(m, x, prot, kDefaultWitnessCap);
      if (!variant) break;
      const Eigen::VectorXd g1 = m.input_gradient(x);
      const Eigen::VectorXd g2 = m.input_gradient(*variant);
      // Step toward the decision boundary: lower the probability when the
      // shared prediction is 1, raise it when it is 0, but only where both
      // gradients agree on the slope's sign.
      const int toward = m.predict(x) == 1 ? -1 : 1;
      bool moved = false;
      for (size_t i : non_prot) {
        int s = sign_of(g1[static_cast<Eigen::Index>(i)]);
        if (s == 0 || sign_of(g2[static_cast<Eigen::Index>(i)]) != s)
          continue;
        Instance next = step_attribute(schema, x, i, toward * s);
        if (next.values[i] != x.values[i]) {
          x.values[i] = next.values[i];
          moved = true;
        }
      }
      if (!moved) break;
    }
  }
  adf_local(m, protected_attrs, prot, non_prot, budget, rng_seed, st);

  st.result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return st.result;
}

GenResult generate(GenEngine engine, const TrainedModel& m,
                   const SeedSet& seeds,
                   const std::vector<std::string>& protected_attrs,
                   const GenBudget& budget, uint64_t rng_seed) {
  switch (engine) {
    case GenEngine::kAequitas:
      return generate_aequitas(m, seeds, protected_attrs, budget, rng_seed);
    case GenEngine::kAdf:
      return generate_adf(m, seeds, protected_attrs, budget, rng_seed);
  }
  throw ConfigError("unknown generation engine");
}

ComparisonTable compare_engines(const std::vector<CompareConfigEntry>& configs,
                                const Dataset& ds,
                                const std::vector<std::string>& protected_attrs,
                                const GenBudget& budget, int trials,
                                uint64_t rng_seed, ModelKind kind,
                                const TrainConfig& train_cfg) {
  if (trials < 1) throw ConfigError("comparison needs at least one trial");
  validate_budget(budget);
  TrainedModel model =
      train(kind, ds, train_cfg, derive_seed(rng_seed, "compare/train"));

  ComparisonTable table;
  table.trials = trials;
  for (size_t ci = 0; ci < configs.size(); ++ci) {
    CompareRow row;
    row.config = configs[ci];
    for (int t = 0; t < trials; ++t) {
      const uint64_t stream = static_cast<uint64_t>(ci) *
                                  static_cast<uint64_t>(trials) +
                              static_cast<uint64_t>(t);
      const uint64_t strat_seed = derive_seed(rng_seed, "compare/seeds", stream);
      SeedSet seeds;
      switch (configs[ci].strategy) {
        case SeedStrategy::kRandom:
          seeds = seed_random(ds, budget.seed_limit, strat_seed);
          break;
        case SeedStrategy::kCluster:
          seeds = seed_cluster(ds, budget.seed_limit, kDefaultClusterK,
                               strat_seed);
          break;
        case SeedStrategy::kIand:
          seeds = seed_iand(model, ds, budget.seed_limit, {}, {}, strat_seed);
          break;
      }
      GenResult gen =
          generate(configs[ci].engine, model, seeds, protected_attrs, budget,
                   derive_seed(rng_seed, "compare/gen", stream));
      row.trial_idis.push_back(static_cast<long long>(gen.idis.size()));
      row.trial_rates.push_back(
          gen.explored > 0
              ? static_cast<double>(gen.idis.size()) /
                    static_cast<double>(gen.explored)
              : 0.0);
      row.trial_wall.push_back(gen.wall_time);
    }
    const double n = static_cast<double>(trials);
    for (long long c : row.trial_idis)
      row.mean_idis += static_cast<double>(c) / n;
    for (double r : row.trial_rates) row.mean_rate += r / n;
    for (double w : row.trial_wall) row.mean_wall += w / n;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string comparison_to_csv(const ComparisonTable& table,
                              bool include_timings) {
  std::string out = include_timings
                        ? "strategy,engine,trials,mean_idis,mean_rate,"
                          "mean_wall_time_s\n"
                        : "strategy,engine,trials,mean_idis,mean_rate\n";
  char buf[160];
  for (const CompareRow& row : table.rows) {
    if (include_timings) {
      std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.2f,%.4f,%.3f\n",
                    std::string(seed_strategy_name(row.config.strategy)).c_str(),
                    std::string(engine_name(row.config.engine)).c_str(),
                    table.trials, row.mean_idis, row.mean_rate, row.mean_wall);
    } else {
      std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.2f,%.4f\n",
                    std::string(seed_strategy_name(row.config.strategy)).c_str(),
                    std::string(engine_name(row.config.engine)).c_str(),
                    table.trials, row.mean_idis, row.mean_rate);
    }
    out += buf;
  }
  return out;
}

}  // namespace fairlens
