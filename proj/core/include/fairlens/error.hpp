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

#ifndef FAIRLENS_ERROR_HPP_
#define FAIRLENS_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace fairlens {

/// Base class for all fairlens errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration: bad flag values, inconsistent budgets, unknown
/// attribute names. CLI exit code 2.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Malformed or out-of-domain input data. CLI exit code 3.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(what) {}
};

/// Failure while computing: diverging training, singular systems. CLI exit
/// code 4.
class ComputeError : public Error {
 public:
  explicit ComputeError(const std::string& what) : Error(what) {}
};

}  // namespace fairlens

#endif  // FAIRLENS_ERROR_HPP_
