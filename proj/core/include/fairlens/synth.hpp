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

#ifndef FAIRLENS_SYNTH_HPP_
#define FAIRLENS_SYNTH_HPP_

#include <cstdint>
#include <vector>

#include "fairlens/dataset.hpp"

namespace fairlens {

// Configuration for the self-contained synthetic dataset generator.  The
// generator draws feature rows uniformly over the schema domains and labels
// them with a planted rule that mixes an additive signal, a few pairwise
// interactions, and a protected-attribute effect that is only active in a
// gated region of the input space.  The gating keeps discrimination
// localized, so random probing finds discriminatory instances at a low rate
// while a substantial pool of them still exists.
struct SynthSpec {
  int attrs = 8;            // total attribute count, protected included
  int rows = 1000;
  int domain_size = 10;     // non-protected attributes get domain {0..size-1}
  int protected_count = 1;  // leading attributes, binary domain {0,1}
  double bias = 3.0;        // strength of the planted protected effect
  double noise = 0.03;      // label flip probability
  double gate_threshold = 0.2;  // higher -> smaller discriminatory region
  uint64_t seed = 1;
};

// The planted labeling rule, exposed so tests can evaluate ground truth
// directly.  All scores operate on scaled-and-centered values
// c_i = (v_i - lo_i) / (hi_i - lo_i) - 0.5.
struct SynthRule {
  std::vector<double> weights;  // per attribute; zero for protected ones
  struct Interaction {
    int a = 0;
    int b = 0;
    double w = 0.0;
  };
  std::vector<Interaction> interactions;
  struct ProtectedEffect {
    int attr = 0;       // protected attribute index
    int gate_attr = 0;  // non-protected attribute controlling the gate
    double w = 0.0;     // signed effect strength
  };
  std::vector<ProtectedEffect> effects;
  double gate_threshold = 0.2;

  double score(const DatasetSchema& schema, const Instance& x) const;
  int clean_label(const DatasetSchema& schema, const Instance& x) const {
    return score(schema, x) > 0.0 ? 1 : 0;
  }
};

// Builds the schema implied by `spec`: protected attributes p0..p{k-1} with
// domain {0,1} first, then non-protected attributes a0..a{m-1} with domain
// {0..domain_size-1}.
DatasetSchema synth_schema(const SynthSpec& spec);

// Draws the rule parameters for `schema` deterministically from `seed`.
SynthRule make_synth_rule(const DatasetSchema& schema, double bias,
                          double gate_threshold, uint64_t seed);

// Samples `rows` uniform rows for `schema`, labels them with `rule`, and
// flips each label independently with probability `noise`.
Dataset synth_rows(const DatasetSchema& schema, int rows,
                   const SynthRule& rule, double noise, uint64_t seed);

// Convenience wrapper: schema + rule + rows in one call.
Dataset synth_dataset(const SynthSpec& spec);

}  // namespace fairlens

#endif  // FAIRLENS_SYNTH_HPP_
