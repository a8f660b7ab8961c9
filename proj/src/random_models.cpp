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

#include "bfnpt/random_models.hpp"

#include <numeric>
#include <string>

namespace bfnpt {

std::vector<double> dirichlet_uniform(CounterRng& rng, std::size_t n) {
  std::vector<double> w(n);
  for (double& x : w) x = rng.exponential();
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

namespace {

std::vector<double> random_column(CounterRng& rng, std::size_t n, double zero_probability) {
  for (;;) {
    std::vector<double> col(n);
    double total = 0.0;
    for (double& x : col) {
      x = rng.uniform() < zero_probability ? 0.0 : rng.exponential();
      total += x;
    }
    if (total > 0.0) {
      for (double& x : col) x /= total;
      return col;
    }
  }
}

Prior random_prior(CounterRng& rng, std::size_t num_parameters, const std::vector<std::size_t>& support) {
  const auto w = dirichlet_uniform(rng, support.size());
  std::vector<double> full(num_parameters, 0.0);
  for (std::size_t k = 0; k < support.size(); ++k) full[support[k]] = w[k];
  return Prior(std::move(full));
}

}  // namespace

RandomModel random_discrete_model(std::uint64_t seed, const RandomModelShape& shape) {
  CounterRng rng(seed, 0x4d4f44454cULL);
  const std::size_t outcomes = shape.min_outcomes + rng.below(shape.max_outcomes - shape.min_outcomes + 1);
  const std::size_t p0 = 1 + rng.below(shape.max_null_points);
  const std::size_t p1 = 1 + rng.below(shape.max_alternative_points);

  std::vector<std::string> labels;
  for (std::size_t i = 0; i < outcomes; ++i) labels.push_back("d" + std::to_string(i));
  std::vector<double> grid;
  std::vector<std::vector<double>> columns;
  for (std::size_t j = 0; j < p0 + p1; ++j) {
    grid.push_back(static_cast<double>(j));
    columns.push_back(random_column(rng, outcomes, shape.zero_entry_probability));
  }
  auto table = std::make_shared<const LikelihoodTable>(SampleSpace(std::move(labels)), ParameterSpace::grid(grid),
                                                       columns);
  std::vector<std::size_t> null_support(p0);
  std::iota(null_support.begin(), null_support.end(), 0);
  std::vector<std::size_t> alt_support(p1);
  std::iota(alt_support.begin(), alt_support.end(), p0);

  Hypothesis null(HypothesisLabel::kNull, table, random_prior(rng, p0 + p1, null_support), null_support);
  Hypothesis alt(HypothesisLabel::kAlternative, table, random_prior(rng, p0 + p1, alt_support), alt_support);
  return {seed, table, std::move(null), std::move(alt)};
}

}  // namespace bfnpt
