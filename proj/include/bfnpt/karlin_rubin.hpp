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

// Monotone likelihood ratio checks, Bayes-factor monotonicity under arbitrary
// priors, and uniformly most powerful threshold tests for one-sided
// hypotheses on a one-dimensional parameter grid.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bfnpt/certificate.hpp"
#include "bfnpt/model.hpp"
#include "bfnpt/np_oracle.hpp"
#include "bfnpt/test_builder.hpp"

namespace bfnpt {

// Ratios are compared with this slack, scaled by max(1, |ratio|).
inline constexpr double kMonotoneTolerance = 1e-12;

// p(T | theta) on the distinct statistic values, formed by summing weighted
// outcome probabilities within each level.
struct CollapsedTable {
  std::vector<double> levels;                // ascending distinct values of T
  std::vector<std::size_t> level_of;         // per outcome
  std::vector<std::vector<double>> columns;  // columns[j][level]
};

CollapsedTable collapse(const LikelihoodTable& likelihood, const Statistic& statistic);

struct MlrViolation {
  double t_low = 0.0;
  double t_high = 0.0;
  std::size_t theta_high = 0;  // parameter indices, theta_high > theta_low
  std::size_t theta_low = 0;
  double ratio_at_t_low = 0.0;
  double ratio_at_t_high = 0.0;
};

struct MlrReport {
  bool holds = true;
  std::optional<MlrViolation> violation;  // first in canonical scan order
  std::vector<double> statistic;
  std::size_t comparisons = 0;
};

// Requires a strictly increasing 1-D grid; x/0 counts as +inf and 0/0 pairs
// are skipped.
MlrReport check_mlr(const LikelihoodTable& likelihood, const Statistic& statistic);

// Samples prior pairs over the two supports (every point-mass corner pair,
// the uniform pair, then prior_samples flat-Dirichlet pairs) and certifies
// that B(T) from the collapsed table is nondecreasing in T for each.
Certificate check_bf_monotone(const Hypothesis& h0, const Hypothesis& h1, const Statistic& statistic,
                              std::size_t prior_samples = 64, std::uint64_t seed = 0);

struct UmptSpec {
  std::size_t theta_c_index = 0;
  double theta_c = 0.0;
  double t0 = 0.0;      // reject when T >= t0 (+inf when nothing is rejected)
  double log_b0 = 0.0;  // equivalent log-Bayes-factor contour
  double alpha_at_theta_c = 0.0;
  double attained = 0.0;  // criterion error of the region
  ErrorCriterion criterion = ErrorCriterion::kMaximum;
  RegionMode mode = RegionMode::kDeterministicConservative;
  bool thresholds_equivalent = false;
  bool certified = false;
};

struct Umpt {
  UmptSpec spec;
  RejectionRegion region;
  // log B per outcome for the Bayes factor matching the criterion: sharp at
  // theta_C for the maximum error, prior-averaged null for the expected one.
  std::vector<double> log_bayes_factor;
};

struct UmptOptions {
  RegionMode mode = RegionMode::kDeterministicConservative;
  bool require_certificate = true;
  std::size_t prior_samples = 64;
  std::uint64_t seed = 0;
};

// Threshold test {T >= T0} with theta_C the largest null grid point. The
// maximum criterion calibrates against p(T | theta_C); the expected one
// against the null-prior average. Throws PreconditionError when neither MLR
// nor Bayes-factor monotonicity can be certified (unless disabled).
Umpt build_umpt(const Hypothesis& h0, const Hypothesis& h1, const Statistic& statistic, double target,
                ErrorCriterion criterion, const UmptOptions& options = {});

// Runs the optimality oracle against every point-mass alternative in the
// alternative support, in the spec's mode and criterion.
Certificate verify_umpt(const Umpt& umpt, const Hypothesis& h0, const Hypothesis& h1,
                        const OracleOptions& options = {});

nlohmann::ordered_json to_json(const MlrReport& r);
nlohmann::ordered_json to_json(const UmptSpec& s);

}  // namespace bfnpt
