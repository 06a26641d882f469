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

#include "fairlens/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "fairlens/error.hpp"
#include "string_util.hpp"

namespace fairlens {
namespace {

double parse_real(std::string_view field, size_t line_no, size_t col_no,
                  const std::string& col_name) {
  const std::string text(trim(field));
  if (text.empty()) {
    std::ostringstream os;
    os << "line " << line_no << ", column " << col_no << " (" << col_name
       << "): empty field";
    throw DataError(os.str());
  }
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(v)) {
    std::ostringstream os;
    os << "line " << line_no << ", column " << col_no << " (" << col_name
       << "): '" << text << "' is not a finite number";
    throw DataError(os.str());
  }
  return v;
}

}  // namespace

int RawTable::column_index(const std::string& name) const {
  for (size_t i = 0; i < column_names.size(); ++i)
    if (column_names[i] == name) return static_cast<int>(i);
  return -1;
}

RawTable load_raw_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open raw CSV file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty raw CSV file: " + path);
  strip_cr(line);

  RawTable table;
  {
    const auto fields = split_on(line, ',');
    if (fields.size() < 2)
      throw DataError("raw CSV header needs at least one feature column and "
                      "a label column: " +
                      path);
    for (size_t i = 0; i + 1 < fields.size(); ++i)
      table.column_names.emplace_back(trim(fields[i]));
    table.label_name = std::string(trim(fields.back()));
  }
  const size_t want = table.column_names.size() + 1;

  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (trim(line).empty()) continue;
    const auto fields = split_on(line, ',');
    if (fields.size() != want) {
      std::ostringstream os;
      os << "line " << line_no << ": expected " << want << " fields, found "
         << fields.size();
      throw DataError(os.str());
    }
    std::vector<double> row(table.column_names.size());
    for (size_t c = 0; c < table.column_names.size(); ++c)
      row[c] = parse_real(fields[c], line_no, c + 1, table.column_names[c]);
    const double lbl =
        parse_real(fields.back(), line_no, want, table.label_name);
    if (lbl != 0.0 && lbl != 1.0) {
      std::ostringstream os;
      os << "line " << line_no << ", column " << want << " ("
         << table.label_name << "): label must be 0 or 1, found " << lbl;
      throw DataError(os.str());
    }
    table.rows.push_back(std::move(row));
    table.labels.push_back(static_cast<int>(lbl));
  }
  return table;
}

int bin_index(double v, const std::vector<double>& edges) {
  // First edge strictly greater than v; values below every edge fall in bin
  // 0 and values at or above the last edge in bin edges.size().
  const auto it = std::upper_bound(edges.begin(), edges.end(), v);
  return static_cast<int>(it - edges.begin());
}

Dataset preprocess_bin(const RawTable& raw, const DatasetSchema& schema) {
  schema.validate();
  std::vector<int> col_of(schema.attributes.size());
  for (size_t a = 0; a < schema.attributes.size(); ++a) {
    const int c = raw.column_index(schema.attributes[a].name);
    if (c < 0)
      throw DataError("raw table has no column named '" +
                      schema.attributes[a].name + "'");
    col_of[a] = c;
  }

  Dataset ds;
  ds.schema = schema;
  ds.labels = raw.labels;
  ds.rows.reserve(raw.rows.size());
  for (size_t r = 0; r < raw.rows.size(); ++r) {
    Instance inst;
    inst.values.resize(schema.attributes.size());
    for (size_t a = 0; a < schema.attributes.size(); ++a) {
      const AttributeSpec& spec = schema.attributes[a];
      const double v = raw.rows[r][col_of[a]];
      int encoded = 0;
      if (!spec.bin_edges.empty()) {
        encoded = bin_index(v, spec.bin_edges);
      } else {
        const double nearest = std::nearbyint(v);
        if (std::abs(v - nearest) > 1e-9) {
          std::ostringstream os;
          os << "row " << r + 1 << ", attribute '" << spec.name
             << "': value " << v << " is not an integer and the attribute "
             << "has no bin edges";
          throw DataError(os.str());
        }
        encoded = static_cast<int>(nearest);
      }
      if (!spec.contains(encoded)) {
        std::ostringstream os;
        os << "row " << r + 1 << ", attribute '" << spec.name << "': encoded "
           << "value " << encoded << " is outside the schema domain";
        throw DataError(os.str());
      }
      inst.values[a] = encoded;
    }
    ds.rows.push_back(std::move(inst));
  }
  ds.validate();
  return ds;
}

}  // namespace fairlens
