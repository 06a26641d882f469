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

#ifndef FAIRLENS_PREPROCESS_HPP_
#define FAIRLENS_PREPROCESS_HPP_

#include <string>
#include <vector>

#include "fairlens/dataset.hpp"

namespace fairlens {

// A raw tabular file before binning: real-valued feature columns plus an
// integer label column.  Column order follows the source file header.
struct RawTable {
  std::vector<std::string> column_names;  // feature columns, label excluded
  std::string label_name;
  std::vector<std::vector<double>> rows;  // rows[r][c] pairs with column_names
  std::vector<int> labels;                // one 0/1 label per row

  int column_index(const std::string& name) const;  // -1 when absent
};

// Reads a raw CSV (header row, comma separated).  The final column is taken
// as the label and must parse as 0 or 1; every other column must parse as a
// finite real number.  Malformed input raises DataError naming the line and
// column.
RawTable load_raw_csv(const std::string& path);

// Maps a raw value onto the bin index used by a binned attribute: the index
// of the first edge strictly greater than `v`, i.e. left-closed right-open
// bins with automatic clamping into the two boundary bins.  `edges` must be
// strictly increasing; the result lies in [0, edges.size()].
int bin_index(double v, const std::vector<double>& edges);

// Bins a raw table into the integer encoding demanded by `schema`.  For each
// schema attribute the raw column with the same name is located; attributes
// with bin edges are binned via bin_index, attributes without edges must hold
// integral values already inside the schema domain.  Raw columns the schema
// does not mention are dropped, which is how label-leaking features are
// excluded.  Raises DataError when a required column is missing, when an
// unbinned value is non-integral or out of domain, or when a binned value
// lands outside the schema domain.
Dataset preprocess_bin(const RawTable& raw, const DatasetSchema& schema);

}  // namespace fairlens

#endif  // FAIRLENS_PREPROCESS_HPP_
