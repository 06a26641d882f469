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

#include "fairlens/discrimination.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "fairlens/error.hpp"
#include "nlohmann/json.hpp"

namespace fairlens {

namespace {

using nlohmann::json;

// Resolves protected attribute names to schema indices, deduplicated and in
// schema order.
std::vector<size_t> resolve_protected(
    const DatasetSchema& schema,
    const std::vector<std::string>& protected_attrs) {
  if (protected_attrs.empty())
    throw ConfigError("discrimination check requires a protected attribute");
  std::vector<size_t> indices;
  for (const auto& name : protected_attrs) {
    int idx = schema.attribute_index(name);
    if (idx < 0)
      throw ConfigError("protected attribute '" + name +
                        "' is not in the schema");
    indices.push_back(static_cast<size_t>(idx));
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return indices;
}

std::vector<std::string> protected_names(const DatasetSchema& schema,
                                         const std::vector<size_t>& indices) {
  std::vector<std::string> names;
  names.reserve(indices.size());
  for (size_t i : indices) names.push_back(schema.attributes[i].name);
  return names;
}

long long product_size_minus_own(const DatasetSchema& schema,
                                 const std::vector<size_t>& indices) {
  long long product = 1;
  const long long kMax = std::numeric_limits<long long>::max();
  for (size_t i : indices) {
    long long d = static_cast<long long>(schema.attributes[i].domain.size());
    if (d != 0 && product > kMax / d) return kMax;  // saturate
    product *= d;
  }
  return product > 0 ? product - 1 : 0;
}

}  // namespace

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kInit:
      return "init";
    case Provenance::kGlobal:
      return "global";
    case Provenance::kLocal:
      return "local";
  }
  throw ConfigError("unknown provenance value");
}

Provenance parse_provenance(const std::string& name) {
  if (name == "init") return Provenance::kInit;
  if (name == "global") return Provenance::kGlobal;
  if (name == "local") return Provenance::kLocal;
  throw ConfigError("unknown provenance '" + name + "'");
}

long long witness_product_size(
    const DatasetSchema& schema,
    const std::vector<std::string>& protected_attrs) {
  return product_size_minus_own(schema,
                                resolve_protected(schema, protected_attrs));
}

std::optional<IdiRecord> check_idi(
    const TrainedModel& m, const Instance& x,
    const std::vector<std::string>& protected_attrs, long long cap,
    Provenance provenance) {
  if (cap < 1) throw ConfigError("witness cap must be at least 1");
  const DatasetSchema& schema = m.schema();
  const std::vector<size_t> prot = resolve_protected(schema, protected_attrs);
  const long long product = product_size_minus_own(schema, prot);
  const bool exhaustive = cap >= product;

  const int label_x = m.predict(x);

  // Odometer over the protected domains, most-significant attribute first.
  std::vector<size_t> cursor(prot.size(), 0);
  Instance variant = x;
  long long evaluated = 0;
  while (true) {
    bool is_own = true;
    for (size_t k = 0; k < prot.size(); ++k) {
      const auto& attr = schema.attributes[prot[k]];
      int v = attr.domain[cursor[k]];
      variant.values[prot[k]] = v;
      is_own = is_own && v == x.values[prot[k]];
    }
    if (!is_own) {
      if (evaluated >= cap) break;
      ++evaluated;
      const int label_v = m.predict(variant);
      if (label_v != label_x) {
        IdiRecord record;
        record.instance = x;
        record.witness = variant;
        record.model_labels = {label_x, label_v};
        record.provenance = provenance;
        record.protected_set = protected_names(schema, prot);
        record.exhaustive = exhaustive;
        return record;
      }
    }
    // Advance the odometer; the last attribute varies fastest.
    size_t k = prot.size();
    while (k > 0) {
      --k;
      if (++cursor[k] < schema.attributes[prot[k]].domain.size()) break;
      cursor[k] = 0;
      if (k == 0) return std::nullopt;  // wrapped around: product done
    }
  }
  return std::nullopt;
}

IdiRateResult idi_rate(const TrainedModel& m,
                       const std::vector<Instance>& instances,
                       const std::vector<std::string>& protected_attrs,
                       long long cap) {
  if (instances.empty())
    throw ConfigError("idi_rate requires at least one instance");
  IdiRateResult result;
  std::unordered_set<Instance, InstanceHash> seen;
  for (const Instance& x : instances) {
    if (!seen.insert(x).second) continue;  // duplicate instance: one record
    auto record = check_idi(m, x, protected_attrs, cap);
    if (record) result.records.push_back(std::move(*record));
  }
  result.rate = static_cast<double>(result.records.size()) /
                static_cast<double>(instances.size());
  return result;
}

std::string records_to_jsonl(const std::vector<IdiRecord>& records) {
  std::ostringstream out;
  for (const IdiRecord& r : records) {
    json j;
    j["exhaustive"] = r.exhaustive;
    j["instance"] = r.instance.values;
    j["labels"] = r.model_labels;
    j["protected"] = r.protected_set;
    j["provenance"] = provenance_name(r.provenance);
    j["witness"] = r.witness.values;
    out << j.dump() << '\n';
  }
  return out.str();
}

std::vector<IdiRecord> records_from_jsonl(const std::string& text) {
  std::vector<IdiRecord> records;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      IdiRecord r;
      r.instance = Instance(j.at("instance").get<std::vector<int>>());
      r.witness = Instance(j.at("witness").get<std::vector<int>>());
      auto labels = j.at("labels").get<std::vector<int>>();
      if (labels.size() != 2)
        throw DataError("record needs exactly two labels");
      r.model_labels = {labels[0], labels[1]};
      r.provenance = parse_provenance(j.at("provenance").get<std::string>());
      r.protected_set = j.at("protected").get<std::vector<std::string>>();
      r.exhaustive = j.at("exhaustive").get<bool>();
      if (r.instance.size() != r.witness.size())
        throw DataError("instance and witness lengths differ");
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw DataError("record line " + std::to_string(line_no) +
                      " is malformed: " + e.what());
    } catch (const ConfigError& e) {
      throw DataError("record line " + std::to_string(line_no) +
                      " is malformed: " + e.what());
    }
  }
  return records;
}

void save_records(const std::vector<IdiRecord>& records,
                  const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write record file '" + path + "'");
  out << records_to_jsonl(records);
  if (!out) throw DataError("failed writing record file '" + path + "'");
}

std::vector<IdiRecord> load_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open record file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return records_from_jsonl(buffer.str());
}

}  // namespace fairlens
