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

#include "bfnpt/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bfnpt/errors.hpp"

namespace bfnpt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_valid(const Hypothesis& h) {
  const auto result = validate_model(h.likelihood());
  if (!result.ok()) throw PreconditionError("invalid likelihood table: " + result.violations.front().message);
}

}  // namespace

double log_sum_exp(std::span<const double> terms) {
  double peak = kNegInf;
  for (double t : terms) peak = std::max(peak, t);
  if (peak == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

LogEvidence marginal_likelihood(const Hypothesis& h) {
  require_valid(h);
  const auto& table = h.likelihood();
  std::vector<std::size_t> active;
  std::vector<double> log_prior;
  for (std::size_t j : h.support()) {
    if (h.prior()[j] > 0.0) {
      active.push_back(j);
      log_prior.push_back(std::log(h.prior()[j]));
    }
  }
  LogEvidence out;
  out.values.resize(table.num_outcomes());
  std::vector<double> terms(active.size());
  for (std::size_t i = 0; i < table.num_outcomes(); ++i) {
    for (std::size_t k = 0; k < active.size(); ++k) {
      terms[k] = std::log(table(i, active[k])) + log_prior[k];
    }
    out.values[i] = log_sum_exp(terms);
  }
  return out;
}

LogBayesFactor log_bayes_factor(const LogEvidence& alternative, const LogEvidence& null) {
  if (alternative.size() != null.size()) throw PreconditionError("evidence vectors differ in length");
  LogBayesFactor out;
  out.values.resize(null.size());
  out.reachable.resize(null.size());
  for (std::size_t i = 0; i < null.size(); ++i) {
    const double e1 = alternative[i];
    const double e0 = null[i];
    if (e1 == kNegInf && e0 == kNegInf) {
      out.values[i] = 0.0;
      out.reachable[i] = false;
      continue;
    }
    out.reachable[i] = true;
    // -inf - (-inf) is excluded above, so this never produces NaN.
    out.values[i] = e1 - e0;
  }
  return out;
}

LogBayesFactor bayes_factor(const Hypothesis& h1, const Hypothesis& h0) {
  if (!same_sample_space(h1, h0)) throw PreconditionError("hypotheses have different sample spaces");
  return log_bayes_factor(marginal_likelihood(h1), marginal_likelihood(h0));
}

LogBayesFactor sharp_null_bayes_factor(const Hypothesis& h1, const Hypothesis& h0, std::size_t theta_hat) {
  if (!h0.in_support(theta_hat)) throw PreconditionError("theta_hat lies outside the null support");
  const Hypothesis sharp = h0.with_prior(Prior::point_mass(h0.prior().size(), theta_hat));
  return bayes_factor(h1, sharp);
}

}  // namespace bfnpt
