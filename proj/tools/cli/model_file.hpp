// Copyright 2026 The bfnpt Authors.
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

#pragma once

// JSON model files: a likelihood (explicit matrix or named family), a null
// and an alternative hypothesis, and optionally a test statistic and a
// fixed sharp-null point. See docs/model-format.md.

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bfnpt/model.hpp"

namespace bfnpt::cli {

// Schema violation or failed validate_model(); maps to kExitModelInvalid.
class ModelFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelSpec {
  std::shared_ptr<const LikelihoodTable> table;
  Hypothesis null;
  Hypothesis alternative;
  Statistic statistic;  // defaults to the numeric outcome labels
  std::optional<std::size_t> theta_hat;
};

ModelSpec parse_model(const nlohmann::json& doc);
// Unreadable files raise ConfigError; anything past reading is a ModelFileError.
ModelSpec load_model(const std::string& path);

}  // namespace bfnpt::cli
