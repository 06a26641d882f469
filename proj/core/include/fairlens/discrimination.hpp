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

#ifndef FAIRLENS_DISCRIMINATION_HPP_
#define FAIRLENS_DISCRIMINATION_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fairlens/dataset.hpp"
#include "fairlens/model.hpp"

namespace fairlens {

// Which search phase first discovered a discriminatory instance.
enum class Provenance { kInit, kGlobal, kLocal };

std::string provenance_name(Provenance p);
Provenance parse_provenance(const std::string& name);  // throws ConfigError

// Default limit on how many protected-value combinations a single
// discrimination check may evaluate.
inline constexpr long long kDefaultWitnessCap = 1000;

// A confirmed individual discriminatory instance: the model assigns
// `instance` and `witness` different labels even though they differ only on
// protected attributes (and on at least one of them).
struct IdiRecord {
  Instance instance{std::vector<int>{}};
  Instance witness{std::vector<int>{}};
  // model_labels[0] is the label of `instance`, model_labels[1] of `witness`.
  std::array<int, 2> model_labels{0, 0};
  Provenance provenance = Provenance::kInit;
  std::vector<std::string> protected_set;  // names, in schema order
  // True when the witness search was configured to cover every protected
  // combination, making a "no witness" answer definitive.
  bool exhaustive = true;

  bool operator==(const IdiRecord&) const = default;
};

// Searches for a witness that flips the model's decision for x. Protected
// value combinations are enumerated in lexicographic order (attributes in
// schema order, domain values ascending), skipping x's own combination, and
// at most `cap` variants are evaluated. Returns the first witness whose
// label differs from x's, or nullopt. With cap at least the product size
// the search is exhaustive. Raises ConfigError for an empty or unknown
// protected set or cap < 1.
std::optional<IdiRecord> check_idi(
    const TrainedModel& m, const Instance& x,
    const std::vector<std::string>& protected_attrs,
    long long cap = kDefaultWitnessCap,
    Provenance provenance = Provenance::kInit);

// Number of protected-value combinations check_idi would enumerate for this
// protected set (the full Cartesian product minus the instance's own
// combination), saturating on overflow.
long long witness_product_size(const DatasetSchema& schema,
                               const std::vector<std::string>& protected_attrs);

struct IdiRateResult {
  double rate = 0.0;
  std::vector<IdiRecord> records;  // deduplicated by instance value vector
};

// Fraction of `instances` that are discriminatory, with one record per
// distinct discriminatory instance. The rate denominator is the raw
// instance count. Raises ConfigError when `instances` is empty.
IdiRateResult idi_rate(const TrainedModel& m,
                       const std::vector<Instance>& instances,
                       const std::vector<std::string>& protected_attrs,
                       long long cap = kDefaultWitnessCap);

// JSON-lines serialization: one compact record object per line.
std::string records_to_jsonl(const std::vector<IdiRecord>& records);
std::vector<IdiRecord> records_from_jsonl(const std::string& text);

void save_records(const std::vector<IdiRecord>& records,
                  const std::string& path);
std::vector<IdiRecord> load_records(const std::string& path);

}  // namespace fairlens

#endif  // FAIRLENS_DISCRIMINATION_HPP_
