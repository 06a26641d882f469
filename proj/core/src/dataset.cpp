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

#include "fairlens/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "fairlens/error.hpp"
#include "fairlens/rng.hpp"

namespace fairlens {

bool AttributeSpec::contains(int v) const {
  return std::binary_search(domain.begin(), domain.end(), v);
}

int AttributeSpec::index_of(int v) const {
  auto it = std::lower_bound(domain.begin(), domain.end(), v);
  if (it == domain.end() || *it != v) return -1;
  return static_cast<int>(it - domain.begin());
}

AttributeSpec AttributeSpec::range(std::string name, int lo, int hi,
                                   bool is_protected) {
  AttributeSpec spec;
  spec.name = std::move(name);
  for (int v = lo; v <= hi; ++v) spec.domain.push_back(v);
  spec.is_protected = is_protected;
  return spec;
}

void DatasetSchema::validate() const {
  if (attributes.empty()) throw ConfigError("schema has no attributes");
  std::set<std::string> names;
  size_t protected_count = 0;
  for (const auto& attr : attributes) {
    if (attr.name.empty()) throw ConfigError("schema attribute without a name");
    if (!names.insert(attr.name).second)
      throw ConfigError("duplicate attribute name '" + attr.name + "'");
    if (attr.domain.empty())
      throw ConfigError("attribute '" + attr.name + "' has an empty domain");
    if (!std::is_sorted(attr.domain.begin(), attr.domain.end()) ||
        std::adjacent_find(attr.domain.begin(), attr.domain.end()) !=
            attr.domain.end())
      throw ConfigError("attribute '" + attr.name +
                        "' domain must be sorted and distinct");
    if (!attr.bin_edges.empty()) {
      for (size_t i = 1; i < attr.bin_edges.size(); ++i)
        if (attr.bin_edges[i - 1] >= attr.bin_edges[i])
          throw ConfigError("attribute '" + attr.name +
                            "' bin edges must be strictly increasing");
      // Binned attributes index their bins 0..edges.size().
      size_t bins = attr.bin_edges.size() + 1;
      if (attr.domain.size() != bins || attr.domain.front() != 0 ||
          attr.domain.back() != static_cast<int>(bins) - 1)
        throw ConfigError("attribute '" + attr.name + "' with " +
                          std::to_string(attr.bin_edges.size()) +
                          " bin edges must have domain 0.." +
                          std::to_string(bins - 1));
    }
    if (attr.is_protected) ++protected_count;
  }
  if (names.count(label_name) > 0)
    throw ConfigError("label name '" + label_name +
                      "' collides with an attribute");
  if (protected_count == attributes.size())
    throw ConfigError("at least one non-protected attribute is required");
}

int DatasetSchema::attribute_index(std::string_view name) const {
  for (size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<int> DatasetSchema::protected_indices() const {
  std::vector<int> out;
  for (size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i].is_protected) out.push_back(static_cast<int>(i));
  return out;
}

uint64_t DatasetSchema::input_domain_size(bool* overflow) const {
  uint64_t size = 1;
  bool saturated = false;
  for (const auto& attr : attributes) {
    uint64_t d = attr.domain.size();
    if (d != 0 && size > UINT64_MAX / d) {
      saturated = true;
      size = UINT64_MAX;
      break;
    }
    size *= d;
  }
  if (overflow != nullptr) *overflow = saturated;
  return size;
}

uint64_t DatasetSchema::fingerprint() const {
  std::ostringstream os;
  os << "label:" << label_name << '\n';
  for (const auto& attr : attributes) {
    os << attr.name << '|' << (attr.is_protected ? 'P' : '-') << '|';
    for (int v : attr.domain) os << v << ',';
    os << '|';
    for (double e : attr.bin_edges) os << e << ',';
    os << '\n';
  }
  return fnv1a64(os.str());
}

size_t InstanceHash::operator()(const Instance& x) const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (int v : x.values) {
    h ^= static_cast<uint64_t>(static_cast<uint32_t>(v));
    h *= 0x100000001b3ULL;
  }
  return static_cast<size_t>(h);
}

void Dataset::validate() const {
  schema.validate();
  if (rows.size() != labels.size())
    throw DataError("row count " + std::to_string(rows.size()) +
                    " does not match label count " +
                    std::to_string(labels.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    int bad = first_domain_violation(schema, rows[r]);
    if (bad >= 0)
      throw DataError("row " + std::to_string(r) + ": value " +
                      std::to_string(rows[r].values[bad]) +
                      " outside the domain of attribute '" +
                      schema.attributes[bad].name + "'");
    if (labels[r] != 0 && labels[r] != 1)
      throw DataError("row " + std::to_string(r) + ": label " +
                      std::to_string(labels[r]) + " is not in {0,1}");
  }
}

int first_domain_violation(const DatasetSchema& schema, const Instance& x) {
  if (x.values.size() != schema.attributes.size()) return 0;
  for (size_t i = 0; i < x.values.size(); ++i)
    if (!schema.attributes[i].contains(x.values[i])) return static_cast<int>(i);
  return -1;
}

Eigen::VectorXd scaled_row(const DatasetSchema& schema, const Instance& x) {
  Eigen::VectorXd out(schema.attributes.size());
  for (size_t i = 0; i < schema.attributes.size(); ++i) {
    const auto& attr = schema.attributes[i];
    double span = attr.hi() - attr.lo();
    out[i] = span > 0 ? (x.values[i] - attr.lo()) / span : 0.0;
  }
  return out;
}

Eigen::MatrixXd scaled_rows(const DatasetSchema& schema,
                            const std::vector<Instance>& rows) {
  Eigen::MatrixXd out(rows.size(), schema.attributes.size());
  for (size_t r = 0; r < rows.size(); ++r)
    out.row(r) = scaled_row(schema, rows[r]).transpose();
  return out;
}

Eigen::MatrixXd scale_matrix(const DatasetSchema& schema,
                             const Eigen::MatrixXd& raw) {
  Eigen::MatrixXd out(raw.rows(), raw.cols());
  for (Eigen::Index c = 0; c < raw.cols(); ++c) {
    const auto& attr = schema.attributes[static_cast<size_t>(c)];
    double span = attr.hi() - attr.lo();
    if (span > 0)
      out.col(c) = (raw.col(c).array() - attr.lo()) / span;
    else
      out.col(c).setZero();
  }
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction,
                                  uint64_t rng_seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("train_fraction must be in (0, 1)");
  std::vector<size_t> order(ds.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(rng_seed);
  rng.shuffle(order);

  size_t train_count =
      static_cast<size_t>(train_fraction * static_cast<double>(ds.size()));
  Dataset train{ds.schema, {}, {}};
  Dataset test{ds.schema, {}, {}};
  train.rows.reserve(train_count);
  test.rows.reserve(ds.size() - train_count);
  for (size_t i = 0; i < order.size(); ++i) {
    Dataset& side = i < train_count ? train : test;
    side.rows.push_back(ds.rows[order[i]]);
    side.labels.push_back(ds.labels[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

Dataset mutate_protected(const Dataset& ds, uint64_t rng_seed) {
  auto prot = ds.schema.protected_indices();
  if (prot.empty())
    throw ConfigError("mutate_protected requires a protected attribute");
  Rng rng(rng_seed);
  Dataset out = ds;
  for (auto& row : out.rows) {
    for (int p : prot) {
      const auto& domain = ds.schema.attributes[static_cast<size_t>(p)].domain;
      int cur = row.values[static_cast<size_t>(p)];
      if (domain.size() == 2) {
        row.values[static_cast<size_t>(p)] =
            cur == domain[0] ? domain[1] : domain[0];
      } else {
        row.values[static_cast<size_t>(p)] =
            domain[rng.uniform_int(domain.size())];
      }
    }
  }
  return out;
}

}  // namespace fairlens
