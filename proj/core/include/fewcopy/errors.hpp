// Copyright 2026 The fewcopy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace fewcopy {

/// Request exceeds a simulation backend's capacity (CLI exit code 3).
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string &what) : std::runtime_error(what) {}
};

/// Malformed experiment configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace fewcopy
