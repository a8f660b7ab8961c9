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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli/config.hpp"
#include "cli/model_file.hpp"
#include "cli/run.hpp"

namespace bfnpt::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string model(const std::string& name) { return std::string(BFNPT_MODELS_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("bfnpt_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(path(name)) << content;
    return path(name);
  }

  ExperimentConfig config(const std::string& command, const std::string& model_file) const {
    ExperimentConfig c;
    c.command = command;
    c.model_path = model_file;
    c.out_path = path("report.json");
    return c;
  }

  fs::path dir_;
};

TEST_F(CliTest, ConfigRoundTrip) {
  auto c = config("power", model("binomial_simple.json"));
  c.criterion = ErrorCriterion::kMaximum;
  c.mode = RegionMode::kRandomizedExact;
  c.seed = 17;
  c.plots = {"power-curve", "size-power-tradeoff"};
  c.sweep = {0.0, 0.1};
  c.exact = true;
  EXPECT_EQ(config_from_json(Json::parse(to_json(c).dump())), c);
}

TEST_F(CliTest, ConfigValidation) {
  auto c = config("calibrate", model("binomial_simple.json"));
  c.target = 1.5;
  EXPECT_THROW(validate(c), ConfigError);
  c.target = 0.05;
  c.plots = {"size-power-tradeoff"};
  EXPECT_THROW(validate(c), ConfigError);
  c.command = "nope";
  EXPECT_THROW(validate(c), ConfigError);
  EXPECT_THROW(config_from_json(Json{{"command", "gibbs"}, {"colour", 1}}), ConfigError);
  EXPECT_THROW(parse_mode("exact"), ConfigError);
}

TEST_F(CliTest, ModelFileErrors) {
  EXPECT_THROW(parse_model(nlohmann::json::parse(R"({"likelihood": {"family": "binomial", "n": 3, "p_grid": [0.5]},
      "null": {"support": "all"}, "alternative": {"support": "all"}, "extra": 1})")),
               ModelFileError);
  EXPECT_THROW(parse_model(nlohmann::json::parse(R"({"likelihood": {"family": "matrix", "outcomes": ["a", "b"],
      "parameters": [0], "columns": [[0.5, 0.6]]}, "null": {"support": "all"}, "alternative": {"support": "all"}})")),
               ModelFileError);
  EXPECT_THROW(load_model(write("bad.json", "{not json")), ModelFileError);
  EXPECT_THROW(load_model(path("missing.json")), ConfigError);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run_and_write(config("evidence", write("bad.json", "{"))), kExitModelInvalid);
  auto c = config("calibrate", model("binomial_simple.json"));
  c.target = -1.0;
  EXPECT_EQ(run_and_write(c), kExitConfigError);
  auto kr = config("verify-kr", model("mlr_violating.json"));
  kr.target = 0.2;
  EXPECT_EQ(run_and_write(kr), kExitClaimFailed);
  EXPECT_TRUE(fs::exists(kr.out_path));
  EXPECT_EQ(run_and_write(config("verify-np", model("gaussian.json"))), kExitConfigError);
}

TEST_F(CliTest, GibbsOnSimpleNull) {
  const auto out = run(config("gibbs", model("binomial_simple.json")));
  EXPECT_EQ(out.exit_code, kExitOk);
  EXPECT_EQ(out.report["results"]["gibbs"]["gap"].get<double>(), 0.0);
  EXPECT_TRUE(out.report["results"]["claim_passed"].get<bool>());
}

TEST_F(CliTest, VerifyNpBinomial) {
  for (bool exact : {false, true}) {
    auto c = config("verify-np", model("binomial_simple.json"));
    c.exact = exact;
    const auto out = run(c);
    EXPECT_EQ(out.exit_code, kExitOk);
    EXPECT_EQ(out.report["results"]["verdict"], "optimal");
  }
}

TEST_F(CliTest, CalibrateBinomial) {
  const auto out = run(config("calibrate", model("binomial_simple.json")));
  const auto& cal = out.report["results"]["calibration"];
  EXPECT_EQ(cal["region"]["rejected_outcomes"], Json::array({"5"}));
  EXPECT_EQ(cal["attained"].get<double>(), 0.03125);
  EXPECT_EQ(out.report["results"]["summary"]["attained"], "0.03125");
}

TEST_F(CliTest, PlotSeries) {
  auto c = config("power", model("binomial_simple.json"));
  const auto out = run(c);
  const auto& curve = out.report["results"]["series"]["power-curve"]["rows"];
  EXPECT_EQ(curve.size(), 1u);
  const auto& tradeoff = out.report["results"]["series"]["size-power-tradeoff"]["rows"];
  ASSERT_EQ(tradeoff.size(), 5u);
  for (std::size_t k = 1; k < tradeoff.size(); ++k) {
    EXPECT_GE(tradeoff[k][2].get<double>(), tradeoff[k - 1][2].get<double>());
  }
  const std::string tsv = emit_plot_data(out.report, "power-curve");
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "theta_index\ttheta\tpower");
  EXPECT_THROW(emit_plot_data(out.report, "nope"), ConfigError);
  EXPECT_EQ(plot_path("/tmp/r.json", "bf-ordering"), "/tmp/r.bf-ordering.tsv");
}

TEST_F(CliTest, BfOrderingFollowsStatisticForMlrFamily) {
  const auto out = run(config("evidence", model("binomial_composite.json")));
  const auto& rows = out.report["results"]["series"]["bf-ordering"]["rows"];
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_GT(rows[k][1].get<double>(), rows[k - 1][1].get<double>());
    EXPECT_GE(rows[k][2].get<double>(), rows[k - 1][2].get<double>());
  }
}

TEST_F(CliTest, PlotFilesWritten) {
  auto c = config("power", model("binomial_composite.json"));
  c.plots = {"power-curve", "size-power-tradeoff", "bf-ordering"};
  ASSERT_EQ(run_and_write(c), kExitOk);
  for (const auto& kind : c.plots) EXPECT_TRUE(fs::exists(plot_path(c.out_path, kind))) << kind;
}

TEST_F(CliTest, DeterministicAcrossWorkers) {
  for (const char* command : {"mc-check", "verify-np", "verify-kr"}) {
    auto c = config(command, model("binomial_composite.json"));
    c.replicas = 20000;
    c.seed = 5;
    c.workers = 1;
    const auto a = run(c).report["results"].dump();
    c.workers = 7;
    EXPECT_EQ(run(c).report["results"].dump(), a) << command;
  }
}

}  // namespace
}  // namespace bfnpt::cli
