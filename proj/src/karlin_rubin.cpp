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

#include "bfnpt/karlin_rubin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bfnpt/counter_rng.hpp"
#include "bfnpt/errors.hpp"
#include "bfnpt/random_models.hpp"

namespace bfnpt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// num/den with x/0 = +inf for x > 0; 0/0 has no value.
std::optional<double> ratio(double num, double den) {
  if (den > 0.0) return num / den;
  if (num > 0.0) return kInf;
  return std::nullopt;
}

// True when `high` falls below `low` by more than the scaled tolerance.
bool decreases(double low, double high) {
  if (std::isinf(low)) return !std::isinf(high);
  return high < low - kMonotoneTolerance * std::max(1.0, std::abs(low));
}

void require_one_sided(const Hypothesis& h0, const Hypothesis& h1) {
  const auto& g0 = h0.likelihood().parameter_space();
  const auto& g1 = h1.likelihood().parameter_space();
  if (g0.dimension() != 1 || g1.dimension() != 1) {
    throw PreconditionError("one-sided hypotheses need a one-dimensional parameter space");
  }
  double null_max = -kInf;
  for (std::size_t j : h0.support()) null_max = std::max(null_max, g0.coordinate(j));
  double alt_min = kInf;
  for (std::size_t j : h1.support()) alt_min = std::min(alt_min, g1.coordinate(j));
  if (!(null_max < alt_min)) {
    throw PreconditionError("null and alternative supports must be disjoint with the null below the alternative");
  }
}

std::vector<double> mixture(const CollapsedTable& table, const std::vector<std::size_t>& support,
                            const std::vector<double>& weights) {
  std::vector<double> out(table.levels.size(), 0.0);
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (weights[k] == 0.0) continue;
    for (std::size_t l = 0; l < out.size(); ++l) out[l] += weights[k] * table.columns[support[k]][l];
  }
  return out;
}

struct PriorChoice {
  std::string kind;
  std::vector<double> null_weights;  // over h0.support()
  std::vector<double> alt_weights;   // over h1.support()
};

std::vector<double> corner(std::size_t n, std::size_t k) {
  std::vector<double> w(n, 0.0);
  w[k] = 1.0;
  return w;
}

}  // namespace

CollapsedTable collapse(const LikelihoodTable& likelihood, const Statistic& statistic) {
  if (statistic.size() != likelihood.num_outcomes()) {
    throw PreconditionError("statistic is not defined on the likelihood's sample space");
  }
  CollapsedTable out;
  out.levels.assign(statistic.values().begin(), statistic.values().end());
  std::sort(out.levels.begin(), out.levels.end());
  out.levels.erase(std::unique(out.levels.begin(), out.levels.end()), out.levels.end());
  for (std::size_t i = 0; i < statistic.size(); ++i) {
    out.level_of.push_back(static_cast<std::size_t>(
        std::lower_bound(out.levels.begin(), out.levels.end(), statistic[i]) - out.levels.begin()));
  }
  const auto& space = likelihood.sample_space();
  out.columns.assign(likelihood.num_parameters(), std::vector<double>(out.levels.size(), 0.0));
  for (std::size_t j = 0; j < likelihood.num_parameters(); ++j) {
    for (std::size_t i = 0; i < likelihood.num_outcomes(); ++i) {
      out.columns[j][out.level_of[i]] += space.weight(i) * likelihood(i, j);
    }
  }
  return out;
}

MlrReport check_mlr(const LikelihoodTable& likelihood, const Statistic& statistic) {
  if (!likelihood.parameter_space().is_increasing_1d()) {
    throw PreconditionError("MLR check needs a strictly increasing one-dimensional parameter grid");
  }
  const auto table = collapse(likelihood, statistic);
  MlrReport report;
  report.statistic.assign(statistic.values().begin(), statistic.values().end());
  const std::size_t levels = table.levels.size();
  for (std::size_t hi = 1; hi < likelihood.num_parameters(); ++hi) {
    for (std::size_t lo = 0; lo < hi; ++lo) {
      for (std::size_t a = 0; a < levels; ++a) {
        const auto ra = ratio(table.columns[hi][a], table.columns[lo][a]);
        if (!ra) continue;
        for (std::size_t b = a + 1; b < levels; ++b) {
          const auto rb = ratio(table.columns[hi][b], table.columns[lo][b]);
          if (!rb) continue;
          ++report.comparisons;
          if (decreases(*ra, *rb)) {
            report.holds = false;
            report.violation = MlrViolation{table.levels[a], table.levels[b], hi, lo, *ra, *rb};
            return report;
          }
        }
      }
    }
  }
  return report;
}

Certificate check_bf_monotone(const Hypothesis& h0, const Hypothesis& h1, const Statistic& statistic,
                              std::size_t prior_samples, std::uint64_t seed) {
  if (!same_sample_space(h0, h1)) throw PreconditionError("hypotheses have different sample spaces");
  require_one_sided(h0, h1);
  const auto null_table = collapse(h0.likelihood(), statistic);
  const auto alt_table = collapse(h1.likelihood(), statistic);
  const auto& s0 = h0.support();
  const auto& s1 = h1.support();

  std::vector<PriorChoice> choices;
  for (std::size_t a = 0; a < s0.size(); ++a) {
    for (std::size_t b = 0; b < s1.size(); ++b) choices.push_back({"corner", corner(s0.size(), a), corner(s1.size(), b)});
  }
  choices.push_back({"uniform", std::vector<double>(s0.size(), 1.0 / static_cast<double>(s0.size())),
                     std::vector<double>(s1.size(), 1.0 / static_cast<double>(s1.size()))});
  CounterRng rng(seed, 0x4b524d4fULL);
  for (std::size_t k = 0; k < prior_samples; ++k) {
    auto w0 = dirichlet_uniform(rng, s0.size());
    auto w1 = dirichlet_uniform(rng, s1.size());
    choices.push_back({"dirichlet", std::move(w0), std::move(w1)});
  }

  Certificate cert;
  cert.claim = "Bayes factor nondecreasing in T for every sampled prior pair";
  cert.seed = seed;
  cert.passed = true;
  const auto& levels = null_table.levels;
  for (std::size_t c = 0; c < choices.size(); ++c) {
    const auto num = mixture(alt_table, s1, choices[c].alt_weights);
    const auto den = mixture(null_table, s0, choices[c].null_weights);
    std::vector<std::optional<double>> bf(levels.size());
    for (std::size_t l = 0; l < levels.size(); ++l) bf[l] = ratio(num[l], den[l]);
    ++cert.checks;
    for (std::size_t a = 0; a < levels.size() && cert.passed; ++a) {
      if (!bf[a]) continue;
      for (std::size_t b = a + 1; b < levels.size(); ++b) {
        if (!bf[b] || !decreases(*bf[a], *bf[b])) continue;
        cert.passed = false;
        nlohmann::ordered_json cx;
        cx["prior_kind"] = choices[c].kind;
        cx["null_weights"] = choices[c].null_weights;
        cx["alternative_weights"] = choices[c].alt_weights;
        cx["t_low"] = levels[a];
        cx["t_high"] = levels[b];
        cx["bayes_factor_at_t_low"] = json_number(*bf[a]);
        cx["bayes_factor_at_t_high"] = json_number(*bf[b]);
        cert.detail["counterexample"] = cx;
        break;
      }
    }
    if (!cert.passed) break;
  }
  cert.detail["prior_samples"] = prior_samples;
  cert.detail["corner_pairs"] = s0.size() * s1.size();
  cert.detail["tolerance"] = kMonotoneTolerance;
  return cert;
}

Umpt build_umpt(const Hypothesis& h0, const Hypothesis& h1, const Statistic& statistic, double target,
                ErrorCriterion criterion, const UmptOptions& options) {
  if (!same_sample_space(h0, h1)) throw PreconditionError("hypotheses have different sample spaces");
  if (!(target >= 0.0 && target <= 1.0)) throw PreconditionError("target error must lie in [0, 1]");
  if (!h0.likelihood().parameter_space().is_increasing_1d()) {
    throw PreconditionError("threshold tests need a strictly increasing one-dimensional parameter grid");
  }
  require_one_sided(h0, h1);

  bool certified = check_mlr(h0.likelihood(), statistic).holds;
  if (!certified) certified = check_bf_monotone(h0, h1, statistic, options.prior_samples, options.seed).passed;
  if (!certified && options.require_certificate) {
    throw PreconditionError("neither MLR nor Bayes-factor monotonicity holds for this statistic");
  }

  Umpt out;
  UmptSpec& spec = out.spec;
  spec.criterion = criterion;
  spec.mode = options.mode;
  spec.certified = certified;
  spec.theta_c_index = h0.support().back();
  spec.theta_c = h0.likelihood().parameter_space().coordinate(spec.theta_c_index);

  const Hypothesis reference = criterion == ErrorCriterion::kMaximum
                                   ? h0.with_prior(Prior::point_mass(h0.prior().size(), spec.theta_c_index))
                                   : h0;
  auto calibration = calibrate_threshold(statistic, reference, target, ErrorCriterion::kExpected, options.mode);
  out.region = std::move(calibration.region);
  spec.t0 = out.region.threshold;
  spec.alpha_at_theta_c = region_probability(out.region, h0).per_parameter[spec.theta_c_index];
  spec.attained = criterion_error(out.region, h0, criterion);

  // Bayes factor on the collapsed statistic, mapped back to outcomes.
  const auto alt_table = collapse(h1.likelihood(), statistic);
  const auto null_table = collapse(reference.likelihood(), statistic);
  std::vector<double> alt_w, null_w;
  for (std::size_t j : h1.support()) alt_w.push_back(h1.prior()[j]);
  for (std::size_t j : reference.support()) null_w.push_back(reference.prior()[j]);
  const auto num = mixture(alt_table, h1.support(), alt_w);
  const auto den = mixture(null_table, reference.support(), null_w);

  const std::size_t n = statistic.size();
  std::vector<bool> reachable(n);
  out.log_bayes_factor.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = alt_table.level_of[i];
    reachable[i] = num[l] > 0.0 || den[l] > 0.0;
    out.log_bayes_factor[i] = reachable[i] ? std::log(num[l]) - std::log(den[l]) : 0.0;
  }
  spec.log_b0 = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.region[i] > 0.0 && reachable[i]) spec.log_b0 = std::min(spec.log_b0, out.log_bayes_factor[i]);
  }
  spec.thresholds_equivalent = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!reachable[i]) continue;
    const bool in_t = out.region[i] > 0.0;
    const bool in_b = out.log_bayes_factor[i] >= spec.log_b0;
    if (in_t != in_b) spec.thresholds_equivalent = false;
  }
  return out;
}

Certificate verify_umpt(const Umpt& umpt, const Hypothesis& h0, const Hypothesis& h1, const OracleOptions& options) {
  Certificate cert;
  cert.claim = "threshold test most powerful at every point alternative";
  cert.passed = true;
  cert.detail["criterion"] = umpt.spec.criterion == ErrorCriterion::kExpected ? "expected" : "maximum";
  cert.detail["mode"] = umpt.spec.mode == RegionMode::kRandomizedExact ? "randomized" : "conservative";
  auto cases = nlohmann::ordered_json::array();
  const auto& grid = h1.likelihood().parameter_space();
  for (std::size_t theta : h1.support()) {
    const Hypothesis point = h1.with_prior(Prior::point_mass(h1.prior().size(), theta));
    const auto result = verify_region_optimality(umpt.region, h0, point, umpt.spec.criterion, umpt.spec.mode, options);
    ++cert.checks;
    if (result.verdict != Verdict::kOptimal) cert.passed = false;
    nlohmann::ordered_json c;
    c["theta_index"] = theta;
    c["theta"] = grid.point(theta);
    c["oracle"] = to_json(result);
    cases.push_back(std::move(c));
  }
  cert.detail["alternatives"] = std::move(cases);
  return cert;
}

nlohmann::ordered_json to_json(const MlrReport& r) {
  nlohmann::ordered_json j;
  j["holds"] = r.holds;
  j["comparisons"] = r.comparisons;
  if (r.violation) {
    const auto& v = *r.violation;
    j["violation"] = {{"t_low", v.t_low},
                      {"t_high", v.t_high},
                      {"theta_high_index", v.theta_high},
                      {"theta_low_index", v.theta_low},
                      {"ratio_at_t_low", json_number(v.ratio_at_t_low)},
                      {"ratio_at_t_high", json_number(v.ratio_at_t_high)}};
  }
  return j;
}

nlohmann::ordered_json to_json(const UmptSpec& s) {
  nlohmann::ordered_json j;
  j["theta_c_index"] = s.theta_c_index;
  j["theta_c"] = s.theta_c;
  j["t0"] = json_number(s.t0);
  j["log_b0"] = json_number(s.log_b0);
  j["alpha_at_theta_c"] = s.alpha_at_theta_c;
  j["attained"] = s.attained;
  j["criterion"] = s.criterion == ErrorCriterion::kExpected ? "expected" : "maximum";
  j["mode"] = s.mode == RegionMode::kRandomizedExact ? "randomized" : "conservative";
  j["thresholds_equivalent"] = s.thresholds_equivalent;
  j["certified"] = s.certified;
  return j;
}

}  // namespace bfnpt
