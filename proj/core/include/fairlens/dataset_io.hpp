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

#ifndef FAIRLENS_DATASET_IO_HPP_
#define FAIRLENS_DATASET_IO_HPP_

#include <string>

#include "fairlens/dataset.hpp"

namespace fairlens {

/// Loads a comma-separated UTF-8 file whose header row is the schema's
/// attribute names in order followed by the label name. Every value is
/// validated against the schema; errors name the line and column.
Dataset load_csv(const std::string& path, const DatasetSchema& schema);

void save_csv(const Dataset& ds, const std::string& path);

/// Schema definition files are plain text:
///
///   label = income
///   [attribute age]
///   domain = 0..8        # or an explicit list: 0,1,2
///   protected = true     # optional, default false
///   bins = 20,30,40      # optional edges for binning raw values
///
/// Lines starting with '#' and blank lines are ignored.
DatasetSchema load_schema(const std::string& path);
DatasetSchema parse_schema(const std::string& text);

void save_schema(const DatasetSchema& schema, const std::string& path);
std::string schema_to_text(const DatasetSchema& schema);

}  // namespace fairlens

#endif  // FAIRLENS_DATASET_IO_HPP_
