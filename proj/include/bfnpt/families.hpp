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

// Named likelihood families used by model files and tests.

#include <vector>

#include "bfnpt/model.hpp"

namespace bfnpt {

// Binomial(n, p) over outcomes "0".."n", one column per p in grid.
LikelihoodTable binomial_table(int n, const std::vector<double>& p_grid);

// Poisson(rate) on 0..truncation, renormalized over the kept outcomes.
// Throws ModelError if any column discards more than tail_mass_bound.
LikelihoodTable poisson_table(const std::vector<double>& rate_grid, int truncation, double tail_mass_bound);

struct QuadratureNodes {
  double lo = -8.0;
  double hi = 8.0;
  int count = 801;
};

// Gaussian location family N(mu, sigma^2) evaluated at midpoint-rule nodes
// spanning [lo, hi]; each node carries weight (hi - lo) / count.
LikelihoodTable gaussian_location_table(const std::vector<double>& mu_grid, double sigma,
                                        const QuadratureNodes& nodes,
                                        double quadrature_tolerance = kDefaultQuadratureTolerance);

}  // namespace bfnpt
