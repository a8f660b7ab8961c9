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

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/config.hpp"
#include "cli/run.hpp"

namespace {

using bfnpt::cli::ConfigError;
using bfnpt::cli::ExperimentConfig;

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  try {
    return bfnpt::cli::config_from_json(nlohmann::ordered_json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayes-factor Neyman-Pearson tests on discrete and quadrature models", "bfnpt"};
  app.set_version_flag("--version", bfnpt::cli::kToolkitVersion);

  std::string command, model, out, criterion, mode, config_path;
  double target = 0.0;
  std::uint64_t seed = 0, replicas = 0, prior_samples = 0;
  std::vector<std::string> plots;
  std::vector<double> sweep;
  bool exact = false;
  unsigned workers = 0;

  std::string commands;
  for (const auto& c : bfnpt::cli::known_commands()) commands += (commands.empty() ? "" : "|") + c;
  auto* cmd_opt = app.add_option("command", command, commands);
  app.add_option("--config", config_path, "JSON config file; flags given on the command line override it");
  auto* model_opt = app.add_option("--model", model, "model file (JSON)");
  auto* out_opt = app.add_option("--out", out, "report path (JSON)");
  auto* target_opt = app.add_option("--target", target, "error target in [0, 1] (default 0.05)");
  auto* criterion_opt = app.add_option("--criterion", criterion, "expected|maximum (default expected)");
  auto* mode_opt = app.add_option("--mode", mode, "conservative|randomized (default conservative)");
  auto* seed_opt = app.add_option("--seed", seed, "seed for sampled priors and Monte Carlo (default 0)");
  auto* replicas_opt = app.add_option("--replicas", replicas, "Monte Carlo replicas (default 100000)");
  auto* prior_opt = app.add_option("--prior-samples", prior_samples, "random prior pairs for verify-kr (default 64)");
  auto* plot_opt = app.add_option("--plot", plots, "power-curve|size-power-tradeoff|bf-ordering (repeatable)");
  auto* sweep_opt = app.add_option("--sweep", sweep, "targets for the size-power tradeoff")->delimiter(',');
  auto* exact_opt = app.add_flag("--exact", exact, "rational arithmetic in the exhaustive oracle");
  app.add_option("--workers", workers, "worker threads (default: hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bfnpt::cli::kExitConfigError;
  }

  try {
    ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config_file(config_path);
    if (cmd_opt->count()) config.command = command;
    if (model_opt->count()) config.model_path = model;
    if (out_opt->count()) config.out_path = out;
    if (target_opt->count()) config.target = target;
    if (criterion_opt->count()) config.criterion = bfnpt::cli::parse_criterion(criterion);
    if (mode_opt->count()) config.mode = bfnpt::cli::parse_mode(mode);
    if (seed_opt->count()) config.seed = seed;
    if (replicas_opt->count()) config.replicas = replicas;
    if (prior_opt->count()) config.prior_samples = prior_samples;
    if (plot_opt->count()) config.plots = plots;
    if (sweep_opt->count()) config.sweep = sweep;
    if (exact_opt->count()) config.exact = exact;
    config.workers = workers;
    return bfnpt::cli::run_and_write(config);
  } catch (const ConfigError& e) {
    std::cerr << "bfnpt: config error: " << e.what() << "\n";
    return bfnpt::cli::kExitConfigError;
  }
}
