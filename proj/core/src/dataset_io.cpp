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

#include "fairlens/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fairlens/error.hpp"
#include "string_util.hpp"

namespace fairlens {

namespace {

int parse_int(std::string_view s, const std::string& where) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError(where + ": '" + std::string(s) + "' is not an integer");
  return value;
}

double parse_double(std::string_view s, const std::string& where) {
  try {
    size_t pos = 0;
    double value = std::stod(std::string(s), &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return value;
  } catch (const std::exception&) {
    throw DataError(where + ": '" + std::string(s) + "' is not a number");
  }
}

std::string domain_text(const AttributeSpec& attr) {
  // Contiguous domains serialize as lo..hi, everything else as a list.
  bool contiguous = attr.hi() - attr.lo() + 1 ==
                    static_cast<int>(attr.domain.size());
  std::ostringstream os;
  if (contiguous && attr.domain.size() > 1) {
    os << attr.lo() << ".." << attr.hi();
  } else {
    for (size_t i = 0; i < attr.domain.size(); ++i) {
      if (i > 0) os << ',';
      os << attr.domain[i];
    }
  }
  return os.str();
}

std::vector<int> parse_domain(std::string_view text, const std::string& where) {
  std::vector<int> domain;
  auto range_pos = text.find("..");
  if (range_pos != std::string_view::npos) {
    int lo = parse_int(trim(text.substr(0, range_pos)), where);
    int hi = parse_int(trim(text.substr(range_pos + 2)), where);
    if (lo > hi) throw ConfigError(where + ": range " + std::string(text) +
                                   " is empty");
    for (int v = lo; v <= hi; ++v) domain.push_back(v);
  } else {
    for (auto part : split_on(text, ','))
      domain.push_back(parse_int(trim(part), where));
  }
  return domain;
}

}  // namespace

Dataset load_csv(const std::string& path, const DatasetSchema& schema) {
  schema.validate();
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line))
    throw DataError("'" + path + "': missing header row");
  strip_cr(line);

  auto header = split_on(line, ',');
  size_t want = schema.attributes.size() + 1;
  if (header.size() != want)
    throw DataError("'" + path + "': header has " +
                    std::to_string(header.size()) + " columns, expected " +
                    std::to_string(want));
  for (size_t i = 0; i < schema.attributes.size(); ++i)
    if (trim(header[i]) != schema.attributes[i].name)
      throw DataError("'" + path + "': header column " + std::to_string(i + 1) +
                      " is '" + std::string(trim(header[i])) + "', expected '" +
                      schema.attributes[i].name + "'");
  if (trim(header.back()) != schema.label_name)
    throw DataError("'" + path + "': last header column must be the label '" +
                    schema.label_name + "'");

  Dataset ds{schema, {}, {}};
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_on(line, ',');
    if (fields.size() != want)
      throw DataError("'" + path + "' line " + std::to_string(lineno) +
                      ": expected " + std::to_string(want) + " fields, got " +
                      std::to_string(fields.size()));
    Instance row;
    row.values.reserve(schema.attributes.size());
    for (size_t i = 0; i < schema.attributes.size(); ++i) {
      const auto& attr = schema.attributes[i];
      int v = parse_int(trim(fields[i]), "'" + path + "' line " +
                                             std::to_string(lineno) +
                                             ", column '" + attr.name + "'");
      if (!attr.contains(v))
        throw DataError("'" + path + "' line " + std::to_string(lineno) +
                        ", column '" + attr.name + "': value " +
                        std::to_string(v) + " outside domain " +
                        domain_text(attr));
      row.values.push_back(v);
    }
    int label = parse_int(trim(fields.back()),
                          "'" + path + "' line " + std::to_string(lineno) +
                              ", column '" + schema.label_name + "'");
    if (label != 0 && label != 1)
      throw DataError("'" + path + "' line " + std::to_string(lineno) +
                      ": label " + std::to_string(label) + " is not in {0,1}");
    ds.rows.push_back(std::move(row));
    ds.labels.push_back(label);
  }
  return ds;
}

void save_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (size_t i = 0; i < ds.schema.attributes.size(); ++i)
    out << ds.schema.attributes[i].name << ',';
  out << ds.schema.label_name << '\n';
  for (size_t r = 0; r < ds.rows.size(); ++r) {
    for (int v : ds.rows[r].values) out << v << ',';
    out << ds.labels[r] << '\n';
  }
  if (!out) throw DataError("failed writing '" + path + "'");
}

DatasetSchema parse_schema(const std::string& text) {
  DatasetSchema schema;
  AttributeSpec* current = nullptr;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    auto stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    std::string where = "schema line " + std::to_string(lineno);

    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        throw ConfigError(where + ": unterminated section header");
      auto inner = trim(stripped.substr(1, stripped.size() - 2));
      if (!inner.starts_with("attribute"))
        throw ConfigError(where + ": unknown section '" + std::string(inner) +
                          "'");
      auto name = trim(inner.substr(std::string_view("attribute").size()));
      if (name.empty()) throw ConfigError(where + ": attribute needs a name");
      schema.attributes.push_back(AttributeSpec{});
      current = &schema.attributes.back();
      current->name = std::string(name);
      continue;
    }

    auto eq = stripped.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(where + ": expected 'key = value'");
    auto key = trim(stripped.substr(0, eq));
    auto value = trim(stripped.substr(eq + 1));

    if (current == nullptr) {
      if (key == "label") {
        schema.label_name = std::string(value);
      } else if (key == "dataset") {
        // informational only
      } else {
        throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
      }
      continue;
    }
    if (key == "domain") {
      current->domain = parse_domain(value, where);
    } else if (key == "protected") {
      if (value == "true")
        current->is_protected = true;
      else if (value == "false")
        current->is_protected = false;
      else
        throw ConfigError(where + ": protected must be true or false");
    } else if (key == "bins") {
      current->bin_edges.clear();
      for (auto part : split_on(value, ','))
        current->bin_edges.push_back(parse_double(trim(part), where));
    } else {
      throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
    }
  }
  schema.validate();
  return schema;
}

DatasetSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schema '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_schema(buffer.str());
}

std::string schema_to_text(const DatasetSchema& schema) {
  std::ostringstream os;
  os << "label = " << schema.label_name << "\n";
  for (const auto& attr : schema.attributes) {
    os << "\n[attribute " << attr.name << "]\n";
    os << "domain = " << domain_text(attr) << "\n";
    if (attr.is_protected) os << "protected = true\n";
    if (!attr.bin_edges.empty()) {
      os << "bins = ";
      for (size_t i = 0; i < attr.bin_edges.size(); ++i) {
        if (i > 0) os << ',';
        os << attr.bin_edges[i];
      }
      os << "\n";
    }
  }
  return os.str();
}

void save_schema(const DatasetSchema& schema, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << schema_to_text(schema);
  if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace fairlens
