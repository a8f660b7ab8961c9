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

#include <string>

#include <json.hpp>

#include "cli/config.hpp"

namespace bfnpt::cli {

struct RunOutcome {
  nlohmann::ordered_json report;
  int exit_code = kExitOk;
};

// Loads the model and dispatches the command. Throws ConfigError,
// ModelFileError, or the library's PreconditionError/ModelError.
RunOutcome run(const ExperimentConfig& config);

// run() plus report and plot files, mapping every failure onto an exit code.
int run_and_write(const ExperimentConfig& config);

// Tab-separated table of one report series. Throws ConfigError when the
// report has no such series.
std::string emit_plot_data(const nlohmann::ordered_json& report, const std::string& kind);

// <out without extension>.<kind>.tsv
std::string plot_path(const std::string& out_path, const std::string& kind);

}  // namespace bfnpt::cli
