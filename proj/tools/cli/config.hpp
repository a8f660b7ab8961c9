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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfnpt/np_oracle.hpp"
#include "bfnpt/test_builder.hpp"

namespace bfnpt::cli {

inline constexpr const char* kToolkitName = "bfnpt";
inline constexpr const char* kToolkitVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitModelInvalid = 3,
  kExitClaimFailed = 4,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string command;
  std::string model_path;
  std::string out_path;
  double target = 0.05;
  ErrorCriterion criterion = ErrorCriterion::kExpected;
  RegionMode mode = RegionMode::kDeterministicConservative;
  std::uint64_t seed = 0;
  std::uint64_t replicas = 100000;
  std::uint64_t prior_samples = 64;
  std::vector<std::string> plots;
  std::vector<double> sweep{0.0, 0.25, 0.5, 0.75, 1.0};
  bool exact = false;  // rational arithmetic in the exhaustive oracle
  // Execution only; excluded from the echoed config and from results.
  unsigned workers = 0;

  bool operator==(const ExperimentConfig&) const = default;
};

const std::vector<std::string>& known_commands();
const std::vector<std::string>& known_plot_kinds();

// Throws ConfigError on the first invalid field.
void validate(const ExperimentConfig& config);

// Echo form; `workers` is deliberately absent.
nlohmann::ordered_json to_json(const ExperimentConfig& config);
// Rejects unknown keys and ill-typed values with ConfigError.
ExperimentConfig config_from_json(const nlohmann::ordered_json& j);

std::string to_string(ErrorCriterion c);
std::string to_string(RegionMode m);
ErrorCriterion parse_criterion(const std::string& s);
RegionMode parse_mode(const std::string& s);

}  // namespace bfnpt::cli
