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

#ifndef FAIRLENS_VERSION_HPP_
#define FAIRLENS_VERSION_HPP_

namespace fairlens {

// Keep in sync with the project() version in the top-level CMakeLists.txt.
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace fairlens

#endif  // FAIRLENS_VERSION_HPP_
