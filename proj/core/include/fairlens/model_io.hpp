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

#ifndef FAIRLENS_MODEL_IO_HPP_
#define FAIRLENS_MODEL_IO_HPP_

#include <string>

#include "fairlens/model.hpp"

namespace fairlens {

// Model files are versioned JSON documents containing the kind, the full
// schema (in the schema text format), the training configuration, and the
// learned parameters at full double precision. Loading validates the format
// version and the parameter shapes; save-then-load reproduces a model with
// identical predictions.
std::string model_to_json(const TrainedModel& m);
TrainedModel model_from_json(const std::string& text);

void save_model(const TrainedModel& m, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace fairlens

#endif  // FAIRLENS_MODEL_IO_HPP_
