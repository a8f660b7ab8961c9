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

#include "bfnpt/families.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "bfnpt/errors.hpp"

namespace bfnpt {

namespace {

std::vector<std::string> integer_labels(int last) {
  std::vector<std::string> labels;
  for (int k = 0; k <= last; ++k) labels.push_back(std::to_string(k));
  return labels;
}

std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double binomial_pmf(int n, int k, double p) {
  // Exact coefficient for the small n this toolkit targets.
  double coeff = 1.0;
  for (int i = 1; i <= k; ++i) coeff = coeff * (n - k + i) / i;
  return coeff * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

}  // namespace

LikelihoodTable binomial_table(int n, const std::vector<double>& p_grid) {
  if (n < 0) throw ModelError("binomial n must be nonnegative");
  std::vector<std::vector<double>> columns;
  for (double p : p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw ModelError("binomial p must lie in [0, 1]");
    std::vector<double> col;
    for (int k = 0; k <= n; ++k) col.push_back(binomial_pmf(n, k, p));
    columns.push_back(std::move(col));
  }
  return LikelihoodTable(SampleSpace(integer_labels(n)), ParameterSpace::grid(p_grid), columns);
}

LikelihoodTable poisson_table(const std::vector<double>& rate_grid, int truncation, double tail_mass_bound) {
  if (truncation < 0) throw ModelError("poisson truncation must be nonnegative");
  if (!(tail_mass_bound >= 0.0)) throw ModelError("poisson tail mass bound must be nonnegative");
  std::vector<std::vector<double>> columns;
  for (double rate : rate_grid) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw ModelError("poisson rate must be positive");
    std::vector<double> col;
    double kept = 0.0;
    for (int k = 0; k <= truncation; ++k) {
      col.push_back(std::exp(k * std::log(rate) - rate - std::lgamma(k + 1.0)));
      kept += col.back();
    }
    if (1.0 - kept > tail_mass_bound) {
      throw ModelError("poisson rate " + shortest(rate) + " loses tail mass " + shortest(1.0 - kept) +
                       " beyond the declared bound");
    }
    for (double& v : col) v /= kept;
    columns.push_back(std::move(col));
  }
  return LikelihoodTable(SampleSpace(integer_labels(truncation)), ParameterSpace::grid(rate_grid), columns);
}

LikelihoodTable gaussian_location_table(const std::vector<double>& mu_grid, double sigma,
                                        const QuadratureNodes& nodes, double quadrature_tolerance) {
  if (!(sigma > 0.0)) throw ModelError("gaussian sigma must be positive");
  if (nodes.count < 1 || !(nodes.hi > nodes.lo)) throw ModelError("invalid quadrature node specification");
  const double h = (nodes.hi - nodes.lo) / nodes.count;
  std::vector<std::string> labels;
  std::vector<double> xs;
  for (int i = 0; i < nodes.count; ++i) {
    xs.push_back(nodes.lo + (i + 0.5) * h);
    labels.push_back(shortest(xs.back()));
  }
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  std::vector<std::vector<double>> columns;
  for (double mu : mu_grid) {
    std::vector<double> col;
    for (double x : xs) {
      const double z = (x - mu) / sigma;
      col.push_back(norm * std::exp(-0.5 * z * z));
    }
    columns.push_back(std::move(col));
  }
  return LikelihoodTable(SampleSpace(std::move(labels), std::vector<double>(xs.size(), h)),
                         ParameterSpace::grid(mu_grid), columns, quadrature_tolerance);
}

}  // namespace bfnpt
