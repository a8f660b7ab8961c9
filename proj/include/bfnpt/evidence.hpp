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

// Marginal likelihoods and Bayes factors, all in log space.

#include <cstddef>
#include <span>
#include <vector>

#include "bfnpt/model.hpp"

namespace bfnpt {

// Max-shifted log(sum(exp(terms))). Empty or all -inf input gives -inf.
double log_sum_exp(std::span<const double> terms);

// log p(D | H) per outcome; -inf where every supported parameter assigns
// the outcome zero probability. Never NaN.
struct LogEvidence {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

// log B(D) = log p(D|H1) - log p(D|H0). Outcomes impossible under both
// hypotheses are marked unreachable and carry value 0; region builders
// never reject them.
struct LogBayesFactor {
  std::vector<double> values;
  std::vector<bool> reachable;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  bool is_reachable(std::size_t i) const { return reachable[i]; }
};

LogEvidence marginal_likelihood(const Hypothesis& h);

// Entrywise difference of two evidences with the +-inf conventions above.
LogBayesFactor log_bayes_factor(const LogEvidence& alternative, const LogEvidence& null);

// Throws PreconditionError when the hypotheses have different sample spaces.
LogBayesFactor bayes_factor(const Hypothesis& h1, const Hypothesis& h0);

// Bayes factor against the null collapsed onto a point mass at theta_hat
// (the parameter index maximizing the type-1 error of the test in use).
LogBayesFactor sharp_null_bayes_factor(const Hypothesis& h1, const Hypothesis& h0, std::size_t theta_hat);

}  // namespace bfnpt
