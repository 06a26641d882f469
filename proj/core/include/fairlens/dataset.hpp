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

#ifndef FAIRLENS_DATASET_HPP_
#define FAIRLENS_DATASET_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fairlens {

/// One tabular attribute: a name, a finite integer value domain, a protected
/// flag, and (for attributes produced by binning a continuous column) the bin
/// edges that map raw values to bin indices.
struct AttributeSpec {
  std::string name;
  std::vector<int> domain;  // sorted, distinct, non-empty
  bool is_protected = false;
  std::vector<double> bin_edges;  // strictly increasing; empty = discrete

  bool contains(int v) const;
  /// Position of v in the sorted domain, -1 if absent.
  int index_of(int v) const;
  int lo() const { return domain.front(); }
  int hi() const { return domain.back(); }
  size_t domain_size() const { return domain.size(); }

  /// Convenience: contiguous domain lo..hi inclusive.
  static AttributeSpec range(std::string name, int lo, int hi,
                             bool is_protected = false);
};

struct DatasetSchema {
  std::vector<AttributeSpec> attributes;
  std::string label_name = "label";  // label domain is always {0,1}

  /// Throws ConfigError on duplicate names, empty domains, missing
  /// non-protected attributes, or bin edges inconsistent with the domain.
  void validate() const;

  int attribute_index(std::string_view name) const;  // -1 if absent
  std::vector<int> protected_indices() const;
  size_t attribute_count() const { return attributes.size(); }

  /// |I| = product of per-attribute domain sizes. Saturates at UINT64_MAX;
  /// *overflow (if given) reports whether saturation happened.
  uint64_t input_domain_size(bool* overflow = nullptr) const;

  /// FNV-1a over the canonical text serialization. Identifies the schema a
  /// model was trained on.
  uint64_t fingerprint() const;
};

/// A fixed-length vector of integer-coded attribute values, one per schema
/// attribute.
struct Instance {
  std::vector<int> values;

  Instance() = default;
  explicit Instance(std::vector<int> v) : values(std::move(v)) {}

  bool operator==(const Instance&) const = default;
  auto operator<=>(const Instance&) const = default;
  size_t size() const { return values.size(); }
  int operator[](size_t i) const { return values[i]; }
};

struct InstanceHash {
  size_t operator()(const Instance& x) const;
};

struct Dataset {
  DatasetSchema schema;
  std::vector<Instance> rows;
  std::vector<int> labels;  // 0/1, one per row

  size_t size() const { return rows.size(); }
  /// Throws DataError if a row violates the schema domains or sizes differ.
  void validate() const;
};

/// Checks one instance against the schema; returns the index of the first
/// offending attribute, or -1 if the instance conforms.
int first_domain_violation(const DatasetSchema& schema, const Instance& x);

/// Min-max scaling by schema domain bounds, independent of any data split:
/// scaled = (v - lo) / (hi - lo), or 0 when the domain is a single value.
Eigen::VectorXd scaled_row(const DatasetSchema& schema, const Instance& x);
Eigen::MatrixXd scaled_rows(const DatasetSchema& schema,
                            const std::vector<Instance>& rows);
/// Scales a matrix whose entries are raw attribute values (doubles).
Eigen::MatrixXd scale_matrix(const DatasetSchema& schema,
                             const Eigen::MatrixXd& raw);

/// Deterministic shuffled partition. Train side gets floor(fraction * n)
/// rows; same seed gives the identical split.
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction,
                                  uint64_t rng_seed);

/// Flips every binary protected value and redraws every non-binary protected
/// value uniformly from its domain (the redraw may repeat the original).
/// Labels and non-protected columns are returned unchanged.
Dataset mutate_protected(const Dataset& ds, uint64_t rng_seed);

}  // namespace fairlens

#endif  // FAIRLENS_DATASET_HPP_
