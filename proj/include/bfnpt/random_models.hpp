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

// Seeded random discrete models for property sweeps and witness searches.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "bfnpt/counter_rng.hpp"
#include "bfnpt/model.hpp"

namespace bfnpt {

struct RandomModelShape {
  std::size_t min_outcomes = 2;
  std::size_t max_outcomes = 12;
  std::size_t max_null_points = 5;
  std::size_t max_alternative_points = 5;
  // Chance that an individual likelihood entry is forced to zero.
  double zero_entry_probability = 0.1;
};

struct RandomModel {
  std::uint64_t seed = 0;
  std::shared_ptr<const LikelihoodTable> table;
  Hypothesis null;
  Hypothesis alternative;
};

// Flat-Dirichlet weights of the given length.
std::vector<double> dirichlet_uniform(CounterRng& rng, std::size_t n);

// Likelihood columns and priors are flat-Dirichlet draws; the null occupies
// the low parameter indices and the alternative the high ones.
RandomModel random_discrete_model(std::uint64_t seed, const RandomModelShape& shape = {});

}  // namespace bfnpt
