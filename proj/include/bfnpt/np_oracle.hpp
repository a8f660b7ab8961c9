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

// Brute-force checks that Bayes-factor contour regions are most powerful.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bfnpt/certificate.hpp"
#include "bfnpt/model.hpp"
#include "bfnpt/test_builder.hpp"

namespace bfnpt {

inline constexpr std::size_t kMaxOracleOutcomes = 22;
// A region only counts as dominating when it beats the candidate by more
// than this much power.
inline constexpr double kDominanceTolerance = 1e-9;

enum class Arithmetic { kDouble, kRational };

struct OracleOptions {
  unsigned workers = 0;  // 0 = hardware concurrency
  Arithmetic arithmetic = Arithmetic::kDouble;
};

struct SearchResult {
  std::uint64_t mask = 0;  // bit i set = outcome i rejected
  RejectionRegion region;
  double power = 0.0;
  double error = 0.0;
  std::uint64_t regions_searched = 0;
  bool exact = false;  // sums evaluated in rational arithmetic
};

// Enumerates all 2^N deterministic regions. Among those whose criterion error
// is within size_budget returns one of maximum expected power, the lowest
// mask on ties. Throws PreconditionError beyond kMaxOracleOutcomes outcomes.
SearchResult exhaustive_search(const Hypothesis& h0, const Hypothesis& h1, double size_budget,
                               ErrorCriterion criterion, const OracleOptions& options = {});

struct RandomizedSolution {
  RejectionRegion region;
  double power = 0.0;
  double size = 0.0;
};

// Fractional-knapsack optimum over all randomized regions at expected size
// size_budget, computed directly from linear predictive masses.
RandomizedSolution randomized_np_solution(const Hypothesis& h0, const Hypothesis& h1, double size_budget);

enum class Verdict { kOptimal, kDominated };

struct OracleResult {
  Verdict verdict = Verdict::kOptimal;
  std::optional<RejectionRegion> witness;
  double region_power = 0.0;
  double region_error = 0.0;
  double best_power = 0.0;
  std::uint64_t regions_searched = 0;
  double tolerance = kDominanceTolerance;
  ErrorCriterion criterion = ErrorCriterion::kExpected;
  RegionMode mode = RegionMode::kDeterministicConservative;
};

// Compares region against the best region of no larger criterion error:
// exhaustive deterministic search, or the randomized optimum in randomized
// mode (against the sharp null at the region's worst-case point when the
// criterion is the maximum error).
OracleResult verify_region_optimality(const RejectionRegion& region, const Hypothesis& h0, const Hypothesis& h1,
                                      ErrorCriterion criterion, RegionMode mode, const OracleOptions& options = {});

// Calibrates the Bayes-factor region (the sharp-null form for the maximum
// criterion) and verifies it.
OracleResult verify_np_optimality(const Hypothesis& h0, const Hypothesis& h1, double size_budget,
                                  ErrorCriterion criterion, RegionMode mode, const OracleOptions& options = {});

nlohmann::ordered_json to_json(const OracleResult& r);

// Scans seeded random models for one where a region built from a likelihood
// ratio at the wrong alternative point is strictly dominated. The returned
// certificate passes when such a witness is found and records its seed.
Certificate search_adversarial_witness(std::uint64_t seed, std::size_t max_models, double size_budget);

}  // namespace bfnpt
