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

#include "bfnpt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "bfnpt/counter_rng.hpp"
#include "bfnpt/errors.hpp"
#include "bfnpt/evidence.hpp"

namespace bfnpt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Cumulative sums for inverse-CDF sampling.
std::vector<double> cumulative(const std::vector<double>& masses) {
  std::vector<double> cum(masses.size());
  double running = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) cum[i] = running += masses[i];
  return cum;
}

std::size_t sample_index(const std::vector<double>& cum, double u) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), u * cum.back());
  return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cum.begin(), cum.size() - 1));
}

}  // namespace

GibbsReport gibbs_gap(const Hypothesis& h0, const Hypothesis& h1, std::size_t theta_hat) {
  if (!same_sample_space(h0, h1)) throw PreconditionError("hypotheses have different sample spaces");
  if (!h0.in_support(theta_hat)) throw PreconditionError("theta_hat lies outside the null support");
  const Hypothesis sharp = h0.with_prior(Prior::point_mass(h0.prior().size(), theta_hat));
  const auto e0 = marginal_likelihood(h0);
  const auto e1 = marginal_likelihood(h1);
  const auto s0 = marginal_likelihood(sharp);
  const auto marginal_bf = log_bayes_factor(e1, e0);
  const auto sharp_bf = log_bayes_factor(e1, s0);
  const auto& space = h0.sample_space();

  GibbsReport report;
  report.contributions.assign(space.size(), 0.0);
  report.h1_terms_cancel = true;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (e0[i] == kNegInf) continue;
    const double reduced = s0[i] - e0[i];
    // With log p(D|H1) = -inf both Bayes factors are -inf and only the
    // reduced form is meaningful.
    if (e1[i] != kNegInf) {
      const double explicit_form = marginal_bf[i] - sharp_bf[i];
      double err = 0.0;
      if (std::isinf(reduced) || std::isinf(explicit_form)) {
        err = explicit_form == reduced ? 0.0 : std::numeric_limits<double>::infinity();
      } else {
        const double scale = std::max({1.0, std::abs(e1[i]), std::abs(e0[i]), std::abs(s0[i])});
        err = std::abs(explicit_form - reduced) / scale;
      }
      report.max_cancellation_error = std::max(report.max_cancellation_error, err);
      if (err > kGibbsTolerance) report.h1_terms_cancel = false;
    }
    report.contributions[i] = space.weight(i) * std::exp(e0[i]) * reduced;
    report.lhs += report.contributions[i];
  }

  // Independent route: KL divergence from linear predictive sums.
  const auto& table = h0.likelihood();
  double kl = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    double p0 = 0.0;
    for (std::size_t j : h0.support()) p0 += h0.prior()[j] * table(i, j);
    if (p0 == 0.0) continue;
    const double p_hat = table(i, theta_hat);
    kl += p_hat > 0.0 ? space.weight(i) * p0 * std::log(p0 / p_hat) : std::numeric_limits<double>::infinity();
  }
  report.negative_kl = -kl;
  report.bound_satisfied = report.lhs <= kGibbsTolerance;
  report.crosscheck_ok = std::isinf(report.lhs) || std::isinf(report.negative_kl)
                             ? report.lhs == report.negative_kl
                             : std::abs(report.lhs - report.negative_kl) <= kKlCrossCheckTolerance;
  return report;
}

Certificate simple_null_consistency(const Hypothesis& h0, const RejectionRegion& region) {
  if (!h0.is_simple() || h0.support().size() != 1) {
    throw PreconditionError("simple-null consistency needs a point-mass null with a one-point support");
  }
  if (region.size() != h0.sample_space().size()) {
    throw PreconditionError("rejection region and hypothesis have different sample spaces");
  }
  const std::size_t atom = *h0.prior().atom();
  const auto& table = h0.likelihood();
  const auto& space = table.sample_space();

  const double expected = region_probability(region, h0).total;
  const double maximum = max_type1(region, h0).alpha_hat;
  double classical = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) classical += space.weight(i) * region[i] * table(i, atom);

  Certificate cert;
  cert.claim = "expected, maximum and classical type-1 rates coincide for a simple null";
  cert.checks = 1;
  cert.passed = expected == maximum && maximum == classical;
  cert.detail["expected_alpha"] = expected;
  cert.detail["max_alpha"] = maximum;
  cert.detail["classical_alpha"] = classical;
  return cert;
}

MonteCarloEstimate monte_carlo_rates(const Hypothesis& h, const RejectionRegion& region, std::uint64_t replicas,
                                     std::uint64_t seed, unsigned workers) {
  if (replicas < 1) throw PreconditionError("monte carlo needs at least one replica");
  if (region.size() != h.sample_space().size()) {
    throw PreconditionError("rejection region and hypothesis have different sample spaces");
  }
  const auto& table = h.likelihood();
  const auto& space = table.sample_space();

  std::vector<std::size_t> params;
  std::vector<double> prior_mass;
  for (std::size_t j : h.support()) {
    if (h.prior()[j] > 0.0) {
      params.push_back(j);
      prior_mass.push_back(h.prior()[j]);
    }
  }
  const auto prior_cum = cumulative(prior_mass);
  std::vector<std::vector<double>> outcome_cum;
  for (std::size_t j : params) {
    std::vector<double> masses(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) masses[i] = space.weight(i) * table(i, j);
    outcome_cum.push_back(cumulative(masses));
  }

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t chunks = std::min<std::uint64_t>(workers, replicas);
  std::vector<std::uint64_t> counts(chunks, 0);
  auto run = [&](std::uint64_t chunk) {
    const std::uint64_t begin = replicas * chunk / chunks;
    const std::uint64_t end = replicas * (chunk + 1) / chunks;
    std::uint64_t hits = 0;
    for (std::uint64_t r = begin; r < end; ++r) {
      CounterRng rng(seed, r);
      const std::size_t k = sample_index(prior_cum, rng.uniform());
      const std::size_t d = sample_index(outcome_cum[k], rng.uniform());
      if (rng.uniform() < region[d]) ++hits;
    }
    counts[chunk] = hits;
  };
  if (chunks == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (std::uint64_t c = 0; c < chunks; ++c) threads.emplace_back(run, c);
    for (auto& t : threads) t.join();
  }

  MonteCarloEstimate out;
  out.replicas = replicas;
  out.seed = seed;
  for (auto c : counts) out.rejections += c;
  out.estimate = static_cast<double>(out.rejections) / static_cast<double>(replicas);
  out.standard_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(replicas));
  return out;
}

nlohmann::ordered_json to_json(const GibbsReport& r) {
  nlohmann::ordered_json j;
  j["gap"] = json_number(r.lhs);
  j["negative_kl"] = json_number(r.negative_kl);
  j["bound_satisfied"] = r.bound_satisfied;
  j["kl_crosscheck_ok"] = r.crosscheck_ok;
  j["h1_terms_cancel"] = r.h1_terms_cancel;
  j["max_cancellation_error"] = json_number(r.max_cancellation_error);
  auto contributions = nlohmann::ordered_json::array();
  for (double c : r.contributions) contributions.push_back(json_number(c));
  j["contributions"] = std::move(contributions);
  return j;
}

nlohmann::ordered_json to_json(const MonteCarloEstimate& e) {
  nlohmann::ordered_json j;
  j["estimate"] = e.estimate;
  j["standard_error"] = e.standard_error;
  j["replicas"] = e.replicas;
  j["rejections"] = e.rejections;
  j["seed"] = e.seed;
  return j;
}

}  // namespace bfnpt
