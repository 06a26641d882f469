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

#include "fairlens/synth.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"

namespace fairlens {
namespace {

// Scaled-and-centered coordinate for one attribute value.
double centered(const AttributeSpec& spec, int v) {
  const int lo = spec.lo();
  const int hi = spec.hi();
  if (hi == lo) return 0.0;
  return static_cast<double>(v - lo) / static_cast<double>(hi - lo) - 0.5;
}

}  // namespace

double SynthRule::score(const DatasetSchema& schema, const Instance& x) const {
  std::vector<double> c(schema.attributes.size());
  for (size_t i = 0; i < c.size(); ++i)
    c[i] = centered(schema.attributes[i], x.values[i]);

  double s = 0.0;
  for (size_t i = 0; i < c.size(); ++i) s += weights[i] * c[i];
  for (const Interaction& t : interactions) s += t.w * c[t.a] * c[t.b];
  for (const ProtectedEffect& e : effects) {
    if (c[e.gate_attr] > gate_threshold) s += e.w * c[e.attr];
  }
  return s;
}

DatasetSchema synth_schema(const SynthSpec& spec) {
  if (spec.attrs < 2)
    throw ConfigError("synthetic schema needs at least 2 attributes");
  if (spec.protected_count < 1 || spec.protected_count >= spec.attrs)
    throw ConfigError(
        "synthetic schema needs 1 <= protected attributes < total "
        "attributes");
  if (spec.domain_size < 2)
    throw ConfigError("synthetic domain size must be at least 2");

  DatasetSchema schema;
  for (int p = 0; p < spec.protected_count; ++p)
    schema.attributes.push_back(
        AttributeSpec::range("p" + std::to_string(p), 0, 1, true));
  for (int a = 0; a < spec.attrs - spec.protected_count; ++a)
    schema.attributes.push_back(AttributeSpec::range(
        "a" + std::to_string(a), 0, spec.domain_size - 1, false));
  schema.validate();
  return schema;
}

SynthRule make_synth_rule(const DatasetSchema& schema, double bias,
                          double gate_threshold, uint64_t seed) {
  schema.validate();
  Rng rng(derive_seed(seed, "synth/rule", 0));

  std::vector<int> non_protected;
  std::vector<int> prot;
  for (size_t i = 0; i < schema.attributes.size(); ++i) {
    if (schema.attributes[i].is_protected)
      prot.push_back(static_cast<int>(i));
    else
      non_protected.push_back(static_cast<int>(i));
  }

  SynthRule rule;
  rule.gate_threshold = gate_threshold;
  rule.weights.assign(schema.attributes.size(), 0.0);
  for (int i : non_protected) rule.weights[i] = rng.gauss();

  const int pair_count =
      static_cast<int>(std::min<size_t>(3, non_protected.size() / 2));
  for (int k = 0; k < pair_count; ++k) {
    SynthRule::Interaction t;
    t.a = non_protected[2 * k];
    t.b = non_protected[2 * k + 1];
    t.w = 0.5 * rng.gauss();
    rule.interactions.push_back(t);
  }

  for (int p : prot) {
    SynthRule::ProtectedEffect e;
    e.attr = p;
    e.gate_attr =
        non_protected[rng.uniform_int(static_cast<uint64_t>(non_protected.size()))];
    e.w = rng.bernoulli(0.5) ? bias : -bias;
    rule.effects.push_back(e);
  }
  return rule;
}

Dataset synth_rows(const DatasetSchema& schema, int rows,
                   const SynthRule& rule, double noise, uint64_t seed) {
  schema.validate();
  if (rows < 0) throw ConfigError("synthetic row count must be non-negative");
  if (noise < 0.0 || noise >= 0.5)
    throw ConfigError("synthetic label noise must lie in [0, 0.5)");

  Rng row_rng(derive_seed(seed, "synth/rows", 0));
  Rng noise_rng(derive_seed(seed, "synth/noise", 0));

  Dataset ds;
  ds.schema = schema;
  ds.rows.reserve(static_cast<size_t>(rows));
  ds.labels.reserve(static_cast<size_t>(rows));
  for (int r = 0; r < rows; ++r) {
    Instance inst;
    inst.values.resize(schema.attributes.size());
    for (size_t a = 0; a < schema.attributes.size(); ++a) {
      const AttributeSpec& spec = schema.attributes[a];
      const uint64_t idx =
          row_rng.uniform_int(static_cast<uint64_t>(spec.domain.size()));
      inst.values[a] = spec.domain[static_cast<size_t>(idx)];
    }
    int label = rule.clean_label(schema, inst);
    if (noise_rng.bernoulli(noise)) label = 1 - label;
    ds.rows.push_back(std::move(inst));
    ds.labels.push_back(label);
  }
  ds.validate();
  return ds;
}

Dataset synth_dataset(const SynthSpec& spec) {
  const DatasetSchema schema = synth_schema(spec);
  const SynthRule rule =
      make_synth_rule(schema, spec.bias, spec.gate_threshold, spec.seed);
  return synth_rows(schema, spec.rows, rule, spec.noise, spec.seed);
}

}  // namespace fairlens
