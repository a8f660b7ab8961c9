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

#include "cli/run.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bfnpt/diagnostics.hpp"
#include "bfnpt/errors.hpp"
#include "bfnpt/evidence.hpp"
#include "bfnpt/karlin_rubin.hpp"
#include "bfnpt/np_oracle.hpp"
#include "cli/model_file.hpp"

namespace bfnpt::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string rounded(double x) {
  if (!std::isfinite(x)) return json_number(x).get<std::string>();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Full-precision value plus a rounded display string.
void put(Json& results, Json& summary, const std::string& key, double x) {
  results[key] = json_number(x);
  summary[key] = rounded(x);
}

Json numbers(std::span<const double> xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(json_number(x));
  return a;
}

Json region_json(const RejectionRegion& r, const SampleSpace& space) {
  Json j;
  j["mode"] = to_string(r.mode);
  j["threshold"] = json_number(r.threshold);
  j["reject_probability"] = numbers(r.reject_probability);
  Json rejected = Json::array();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] > 0.0) rejected.push_back(space.outcome(i));
  }
  j["rejected_outcomes"] = std::move(rejected);
  return j;
}

Json error_report_json(const ErrorReport& e, const ParameterSpace& grid) {
  Json j;
  j["expected_alpha"] = e.expected_alpha;
  j["max_alpha"] = e.max_alpha;
  j["theta_hat_index"] = e.theta_hat;
  j["theta_hat"] = e.theta_hat_point;
  j["expected_power"] = e.expected_power;
  Json curve = Json::array();
  for (const auto& p : e.power_curve) curve.push_back({{"theta_index", p.parameter}, {"theta", grid.point(p.parameter)}, {"power", p.power}});
  j["power_curve"] = std::move(curve);
  return j;
}

Json series(std::vector<std::string> columns, Json rows) {
  return Json{{"columns", std::move(columns)}, {"rows", std::move(rows)}};
}

Json bf_ordering_series(const ModelSpec& m, const LogBayesFactor& lb) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < lb.size(); ++i) {
    rows.push_back(Json::array({m.table->sample_space().outcome(i), m.statistic[i],
                                lb.is_reachable(i) ? json_number(lb[i]) : Json("unreachable")}));
  }
  return series({"outcome", "T", "log_bayes_factor"}, std::move(rows));
}

Json power_curve_series(const ErrorReport& e, const ParameterSpace& grid) {
  Json rows = Json::array();
  for (const auto& p : e.power_curve) {
    const auto& pt = grid.point(p.parameter);
    rows.push_back(Json::array({p.parameter, pt.size() == 1 ? Json(pt[0]) : Json(pt), p.power}));
  }
  return series({"theta_index", "theta", "power"}, std::move(rows));
}

// The region each command reports: the marginal Bayes factor for the
// expected criterion, the sharp-null form for the maximum criterion.
struct CalibratedTest {
  Calibration calibration;
  LogBayesFactor statistic;
  std::string statistic_name;
  bool self_consistent = true;
};

CalibratedTest calibrate(const ExperimentConfig& c, const ModelSpec& m, double target) {
  if (c.criterion == ErrorCriterion::kExpected) {
    auto lb = bayes_factor(m.alternative, m.null);
    auto cal = calibrate_threshold(lb, m.null, target, c.criterion, c.mode);
    return {std::move(cal), std::move(lb), "log-bayes-factor", true};
  }
  auto sharp = calibrate_sharp_null(m.alternative, m.null, target, c.mode);
  return {std::move(sharp.calibration), std::move(sharp.statistic), "sharp-null-log-bayes-factor",
          sharp.self_consistent};
}

Json calibration_json(const CalibratedTest& t, const ModelSpec& m, Json& summary) {
  Json j;
  j["statistic"] = t.statistic_name;
  j["criterion"] = to_string(t.calibration.criterion);
  j["target"] = t.calibration.target;
  put(j, summary, "attained", t.calibration.attained);
  j["theta_hat_index"] = t.calibration.theta_hat;
  if (t.calibration.criterion == ErrorCriterion::kMaximum) j["sharp_null_self_consistent"] = t.self_consistent;
  j["region"] = region_json(t.calibration.region, m.table->sample_space());
  return j;
}

struct CommandResult {
  Json results;
  bool claim_passed = true;
};

CommandResult cmd_evidence(const ExperimentConfig&, const ModelSpec& m) {
  CommandResult out;
  Json& r = out.results;
  const auto e0 = marginal_likelihood(m.null);
  const auto e1 = marginal_likelihood(m.alternative);
  const auto lb = log_bayes_factor(e1, e0);
  r["outcomes"] = m.table->sample_space().outcomes();
  r["statistic"] = numbers(m.statistic.values());
  r["log_evidence_null"] = numbers(e0.values);
  r["log_evidence_alternative"] = numbers(e1.values);
  r["log_bayes_factor"] = numbers(lb.values);
  r["reachable"] = lb.reachable;
  if (m.theta_hat) {
    const auto sharp = sharp_null_bayes_factor(m.alternative, m.null, *m.theta_hat);
    r["sharp_null"] = {{"theta_hat_index", *m.theta_hat}, {"log_bayes_factor", numbers(sharp.values)}};
  }
  r["series"]["bf-ordering"] = bf_ordering_series(m, lb);
  return out;
}

CommandResult cmd_calibrate(const ExperimentConfig& c, const ModelSpec& m, bool with_tradeoff) {
  CommandResult out;
  Json& r = out.results;
  Json summary;
  const auto test = calibrate(c, m, c.target);
  r["calibration"] = calibration_json(test, m, summary);
  const auto report = error_report(test.calibration.region, m.null, m.alternative);
  r["error_report"] = error_report_json(report, m.table->parameter_space());
  summary["expected_alpha"] = rounded(report.expected_alpha);
  summary["max_alpha"] = rounded(report.max_alpha);
  summary["expected_power"] = rounded(report.expected_power);
  r["series"]["bf-ordering"] = bf_ordering_series(m, bayes_factor(m.alternative, m.null));
  r["series"]["power-curve"] = power_curve_series(report, m.table->parameter_space());
  if (with_tradeoff) {
    Json rows = Json::array();
    for (double t : c.sweep) {
      const auto point = calibrate(c, m, t);
      const auto e = error_report(point.calibration.region, m.null, m.alternative);
      rows.push_back(Json::array({t, e.expected_alpha, e.expected_power}));
    }
    r["series"]["size-power-tradeoff"] = series({"target", "expected_alpha", "expected_power"}, std::move(rows));
  }
  r["summary"] = std::move(summary);
  return out;
}

CommandResult cmd_verify_np(const ExperimentConfig& c, const ModelSpec& m) {
  CommandResult out;
  Json& r = out.results;
  OracleOptions options;
  options.workers = c.workers;
  options.arithmetic = c.exact ? Arithmetic::kRational : Arithmetic::kDouble;
  const auto test = calibrate(c, m, c.target);
  const auto result =
      verify_region_optimality(test.calibration.region, m.null, m.alternative, c.criterion, c.mode, options);
  Json summary;
  r["calibration"] = calibration_json(test, m, summary);
  r["oracle"] = to_json(result);
  r["exact_arithmetic"] = c.exact && c.mode == RegionMode::kDeterministicConservative;
  out.claim_passed = result.verdict == Verdict::kOptimal;
  r["verdict"] = result.verdict == Verdict::kOptimal ? "optimal" : "dominated";
  r["summary"] = std::move(summary);
  return out;
}

CommandResult cmd_verify_kr(const ExperimentConfig& c, const ModelSpec& m) {
  CommandResult out;
  Json& r = out.results;
  OracleOptions oracle;
  oracle.workers = c.workers;
  oracle.arithmetic = c.exact ? Arithmetic::kRational : Arithmetic::kDouble;
  const auto mlr = check_mlr(*m.table, m.statistic);
  const auto monotone = check_bf_monotone(m.null, m.alternative, m.statistic, c.prior_samples, c.seed);
  UmptOptions options;
  options.mode = c.mode;
  options.require_certificate = false;
  options.prior_samples = c.prior_samples;
  options.seed = c.seed;
  const auto umpt = build_umpt(m.null, m.alternative, m.statistic, c.target, c.criterion, options);
  const auto verified = verify_umpt(umpt, m.null, m.alternative, oracle);
  r["mlr"] = to_json(mlr);
  r["bf_monotone"] = to_json(monotone);
  r["umpt"] = to_json(umpt.spec);
  r["region"] = region_json(umpt.region, m.table->sample_space());
  r["umpt_optimality"] = to_json(verified);
  out.claim_passed = (mlr.holds || monotone.passed) && umpt.spec.thresholds_equivalent && verified.passed;
  return out;
}

CommandResult cmd_gibbs(const ExperimentConfig& c, const ModelSpec& m) {
  CommandResult out;
  Json& r = out.results;
  std::size_t theta_hat = 0;
  if (m.theta_hat) {
    theta_hat = *m.theta_hat;
    r["theta_hat_source"] = "model";
  } else {
    theta_hat = calibrate_sharp_null(m.alternative, m.null, c.target, c.mode).theta_hat;
    r["theta_hat_source"] = "calibrated";
  }
  r["theta_hat_index"] = theta_hat;
  const auto report = gibbs_gap(m.null, m.alternative, theta_hat);
  r["gibbs"] = to_json(report);
  Json summary;
  summary["gap"] = rounded(report.lhs);
  r["summary"] = std::move(summary);
  out.claim_passed = report.bound_satisfied && report.crosscheck_ok && report.h1_terms_cancel;
  return out;
}

CommandResult cmd_mc_check(const ExperimentConfig& c, const ModelSpec& m) {
  CommandResult out;
  Json& r = out.results;
  Json summary;
  const auto test = calibrate(c, m, c.target);
  r["calibration"] = calibration_json(test, m, summary);
  const std::pair<const char*, const Hypothesis*> sides[] = {{"null", &m.null}, {"alternative", &m.alternative}};
  std::uint64_t stream_seed = c.seed;
  for (const auto& [name, h] : sides) {
    const double exact = region_probability(test.calibration.region, *h).total;
    const auto mc = monte_carlo_rates(*h, test.calibration.region, c.replicas, stream_seed++, c.workers);
    // Standard error floored at its value for the exact rate, so a zero-width
    // estimate cannot fail a nonzero exact rate by construction.
    const double se = std::max(mc.standard_error,
                               std::sqrt(exact * (1.0 - exact) / static_cast<double>(mc.replicas)));
    const bool within = std::abs(mc.estimate - exact) <= 4.0 * se;
    Json side;
    side["exact"] = exact;
    side["monte_carlo"] = to_json(mc);
    side["within_4_se"] = within;
    r[name] = std::move(side);
    summary[std::string(name) + "_exact"] = rounded(exact);
    summary[std::string(name) + "_estimate"] = rounded(mc.estimate);
    out.claim_passed = out.claim_passed && within;
  }
  r["summary"] = std::move(summary);
  return out;
}

std::string cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v.get<double>());
    return std::string(buf, res.ptr);
  }
  return v.dump();
}

}  // namespace

RunOutcome run(const ExperimentConfig& config) {
  validate(config);
  const ModelSpec model = load_model(config.model_path);
  const auto start = std::chrono::steady_clock::now();

  CommandResult result;
  const auto& cmd = config.command;
  if (cmd == "evidence") result = cmd_evidence(config, model);
  else if (cmd == "calibrate") result = cmd_calibrate(config, model, false);
  else if (cmd == "power") result = cmd_calibrate(config, model, true);
  else if (cmd == "verify-np") result = cmd_verify_np(config, model);
  else if (cmd == "verify-kr") result = cmd_verify_kr(config, model);
  else if (cmd == "gibbs") result = cmd_gibbs(config, model);
  else result = cmd_mc_check(config, model);

  const bool is_claim = cmd == "verify-np" || cmd == "verify-kr" || cmd == "gibbs" || cmd == "mc-check";
  if (is_claim) result.results["claim_passed"] = result.claim_passed;

  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  RunOutcome out;
  out.report["toolkit"] = kToolkitName;
  out.report["version"] = kToolkitVersion;
  out.report["config"] = to_json(config);
  out.report["seeds"] = {{"seed", config.seed}};
  out.report["results"] = std::move(result.results);
  out.report["timing"] = {{"elapsed_seconds", elapsed}};
  out.exit_code = result.claim_passed ? kExitOk : kExitClaimFailed;
  return out;
}

std::string emit_plot_data(const nlohmann::ordered_json& report, const std::string& kind) {
  const auto* results = report.contains("results") ? &report["results"] : nullptr;
  if (!results || !results->contains("series") || !(*results)["series"].contains(kind)) {
    throw ConfigError("report has no '" + kind + "' series");
  }
  const auto& s = (*results)["series"][kind];
  std::string out;
  const auto& columns = s["columns"];
  for (std::size_t k = 0; k < columns.size(); ++k) out += (k ? "\t" : "") + columns[k].get<std::string>();
  out += '\n';
  for (const auto& row : s["rows"]) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "\t" : "") + cell(row[k]);
    out += '\n';
  }
  return out;
}

std::string plot_path(const std::string& out_path, const std::string& kind) {
  std::filesystem::path p(out_path);
  p.replace_extension();
  return p.string() + "." + kind + ".tsv";
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
}

}  // namespace

int run_and_write(const ExperimentConfig& config) {
  try {
    const auto outcome = run(config);
    write_file(config.out_path, outcome.report.dump(2) + "\n");
    for (const auto& kind : config.plots) write_file(plot_path(config.out_path, kind), emit_plot_data(outcome.report, kind));
    if (outcome.exit_code == kExitClaimFailed) std::cerr << "bfnpt: claim check failed; see " << config.out_path << "\n";
    return outcome.exit_code;
  } catch (const ModelFileError& e) {
    std::cerr << "bfnpt: invalid model: " << e.what() << "\n";
    return kExitModelInvalid;
  } catch (const ModelError& e) {
    std::cerr << "bfnpt: invalid model: " << e.what() << "\n";
    return kExitModelInvalid;
  } catch (const ConfigError& e) {
    std::cerr << "bfnpt: config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const PreconditionError& e) {
    std::cerr << "bfnpt: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace bfnpt::cli
