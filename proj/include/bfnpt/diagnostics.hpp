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

// Numerical checks of side claims: the marginal-vs-sharp null Gibbs bound,
// simple-null rate identities, and Monte Carlo cross-checks of exact rates.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bfnpt/certificate.hpp"
#include "bfnpt/model.hpp"
#include "bfnpt/test_builder.hpp"

namespace bfnpt {

inline constexpr double kGibbsTolerance = 1e-12;
inline constexpr double kKlCrossCheckTolerance = 1e-10;

struct GibbsReport {
  // E_{p(D|H0)}[log B_marginal(D) - log B_sharp(D)] in nats.
  double lhs = 0.0;
  // -KL(p(.|H0) || p(.|H0, theta_hat)), computed from linear sums.
  double negative_kl = 0.0;
  bool bound_satisfied = false;   // lhs <= kGibbsTolerance
  bool crosscheck_ok = false;     // |lhs - negative_kl| <= kKlCrossCheckTolerance
  bool h1_terms_cancel = false;   // explicit and reduced forms agree per outcome
  double max_cancellation_error = 0.0;
  std::vector<double> contributions;  // per outcome; 0 where p(D|H0) = 0
};

// theta_hat must be in h0's support. Outcomes with zero null predictive mass
// are excluded from the expectation.
GibbsReport gibbs_gap(const Hypothesis& h0, const Hypothesis& h1, std::size_t theta_hat);

// For a point-mass null, checks expected, maximum and classical type-1 rates
// agree bit for bit. Throws PreconditionError for composite nulls.
Certificate simple_null_consistency(const Hypothesis& h0, const RejectionRegion& region);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t rejections = 0;
  std::uint64_t seed = 0;
};

// Draws theta from the prior, D from p(.|H, theta), and rejects with the
// region's probability. Replica r always uses stream r of the seed, so the
// estimate does not depend on the worker count.
MonteCarloEstimate monte_carlo_rates(const Hypothesis& h, const RejectionRegion& region, std::uint64_t replicas,
                                     std::uint64_t seed, unsigned workers = 0);

nlohmann::ordered_json to_json(const GibbsReport& r);
nlohmann::ordered_json to_json(const MonteCarloEstimate& e);

}  // namespace bfnpt
