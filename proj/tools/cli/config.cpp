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

#include "cli/config.hpp"

#include <algorithm>
#include <set>

namespace bfnpt::cli {

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> commands{"evidence", "calibrate", "power", "verify-np",
                                                 "verify-kr", "gibbs",     "mc-check"};
  return commands;
}

const std::vector<std::string>& known_plot_kinds() {
  static const std::vector<std::string> kinds{"power-curve", "size-power-tradeoff", "bf-ordering"};
  return kinds;
}

std::string to_string(ErrorCriterion c) { return c == ErrorCriterion::kExpected ? "expected" : "maximum"; }

std::string to_string(RegionMode m) {
  return m == RegionMode::kRandomizedExact ? "randomized" : "conservative";
}

ErrorCriterion parse_criterion(const std::string& s) {
  if (s == "expected") return ErrorCriterion::kExpected;
  if (s == "maximum") return ErrorCriterion::kMaximum;
  throw ConfigError("unknown criterion '" + s + "' (expected|maximum)");
}

RegionMode parse_mode(const std::string& s) {
  if (s == "conservative") return RegionMode::kDeterministicConservative;
  if (s == "randomized") return RegionMode::kRandomizedExact;
  throw ConfigError("unknown mode '" + s + "' (conservative|randomized)");
}

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Commands whose report carries each plot series.
bool plot_supported(const std::string& command, const std::string& kind) {
  if (kind == "bf-ordering") return command == "evidence" || command == "calibrate" || command == "power";
  if (kind == "power-curve") return command == "calibrate" || command == "power";
  return command == "power";
}

}  // namespace

void validate(const ExperimentConfig& c) {
  if (!contains(known_commands(), c.command)) throw ConfigError("unknown command '" + c.command + "'");
  if (c.model_path.empty()) throw ConfigError("--model is required");
  if (c.out_path.empty()) throw ConfigError("--out is required");
  if (!(c.target >= 0.0 && c.target <= 1.0)) throw ConfigError("--target must lie in [0, 1]");
  if (c.replicas < 1) throw ConfigError("--replicas must be at least 1");
  for (const auto& kind : c.plots) {
    if (!contains(known_plot_kinds(), kind)) throw ConfigError("unknown plot kind '" + kind + "'");
    if (!plot_supported(c.command, kind)) {
      throw ConfigError("command '" + c.command + "' does not produce the '" + kind + "' series");
    }
  }
  if (c.sweep.empty()) throw ConfigError("sweep needs at least one target");
  for (double t : c.sweep) {
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("sweep targets must lie in [0, 1]");
  }
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["model"] = c.model_path;
  j["out"] = c.out_path;
  j["target"] = c.target;
  j["criterion"] = to_string(c.criterion);
  j["mode"] = to_string(c.mode);
  j["seed"] = c.seed;
  j["replicas"] = c.replicas;
  j["prior_samples"] = c.prior_samples;
  j["plots"] = c.plots;
  j["sweep"] = c.sweep;
  j["exact"] = c.exact;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::ordered_json& j) {
  static const std::set<std::string> keys{"command", "model",         "out",   "target", "criterion",
                                          "mode",    "seed",          "replicas", "prior_samples",
                                          "plots",   "sweep",         "exact"};
  if (!j.is_object()) throw ConfigError("config must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!keys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    if (j.contains("model")) c.model_path = j["model"].get<std::string>();
    if (j.contains("out")) c.out_path = j["out"].get<std::string>();
    if (j.contains("target")) c.target = j["target"].get<double>();
    if (j.contains("criterion")) c.criterion = parse_criterion(j["criterion"].get<std::string>());
    if (j.contains("mode")) c.mode = parse_mode(j["mode"].get<std::string>());
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("replicas")) c.replicas = j["replicas"].get<std::uint64_t>();
    if (j.contains("prior_samples")) c.prior_samples = j["prior_samples"].get<std::uint64_t>();
    if (j.contains("plots")) c.plots = j["plots"].get<std::vector<std::string>>();
    if (j.contains("sweep")) c.sweep = j["sweep"].get<std::vector<double>>();
    if (j.contains("exact")) c.exact = j["exact"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

}  // namespace bfnpt::cli
