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

#include "bfnpt/model.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "bfnpt/errors.hpp"

namespace bfnpt {

namespace {

void check_outcomes(const std::vector<std::string>& outcomes) {
  if (outcomes.empty()) throw ModelError("sample space has no outcomes");
  std::unordered_set<std::string> seen;
  for (const auto& o : outcomes) {
    if (!seen.insert(o).second) throw ModelError("duplicate outcome identifier '" + o + "'");
  }
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

SampleSpace::SampleSpace(std::vector<std::string> outcomes)
    : outcomes_(std::move(outcomes)), kind_(SampleKind::kDiscreteExact) {
  check_outcomes(outcomes_);
  weights_.assign(outcomes_.size(), 1.0);
}

SampleSpace::SampleSpace(std::vector<std::string> outcomes, std::vector<double> weights)
    : outcomes_(std::move(outcomes)), kind_(SampleKind::kQuadratureGrid), weights_(std::move(weights)) {
  check_outcomes(outcomes_);
  if (weights_.size() != outcomes_.size()) {
    throw ModelError("quadrature weight count does not match outcome count");
  }
  for (double w : weights_) {
    if (!std::isfinite(w) || w <= 0.0) throw ModelError("quadrature weights must be positive and finite");
  }
}

ParameterSpace::ParameterSpace(std::vector<std::vector<double>> points) : points_(std::move(points)) {
  if (points_.empty()) throw ModelError("parameter space has no points");
  const std::size_t dim = points_.front().size();
  if (dim == 0) throw ModelError("parameter points must have positive dimension");
  for (const auto& p : points_) {
    if (p.size() != dim) throw ModelError("parameter points differ in dimension");
    for (double c : p) {
      if (!std::isfinite(c)) throw ModelError("parameter coordinates must be finite");
    }
  }
}

ParameterSpace ParameterSpace::grid(const std::vector<double>& values) {
  std::vector<std::vector<double>> points;
  points.reserve(values.size());
  for (double v : values) points.push_back({v});
  return ParameterSpace(std::move(points));
}

bool ParameterSpace::is_increasing_1d() const {
  if (dimension() != 1) return false;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i][0] > points_[i - 1][0])) return false;
  }
  return true;
}

double ParameterSpace::coordinate(std::size_t i) const {
  if (dimension() != 1) throw PreconditionError("parameter space is not one-dimensional");
  return points_.at(i)[0];
}

LikelihoodTable::LikelihoodTable(SampleSpace sample_space, ParameterSpace parameter_space,
                                 const std::vector<std::vector<double>>& columns,
                                 double quadrature_tolerance)
    : sample_space_(std::move(sample_space)),
      parameter_space_(std::move(parameter_space)),
      quadrature_tolerance_(quadrature_tolerance) {
  if (columns.size() != parameter_space_.size()) {
    throw ModelError("likelihood has " + std::to_string(columns.size()) + " columns for " +
                     std::to_string(parameter_space_.size()) + " parameter points");
  }
  if (!(quadrature_tolerance_ > 0.0)) throw ModelError("quadrature tolerance must be positive");
  values_.reserve(columns.size() * sample_space_.size());
  for (const auto& col : columns) {
    if (col.size() != sample_space_.size()) {
      throw ModelError("likelihood column length does not match the sample space");
    }
    values_.insert(values_.end(), col.begin(), col.end());
  }
}

double LikelihoodTable::normalization_tolerance() const {
  return sample_space_.kind() == SampleKind::kDiscreteExact ? kNormalizationTolerance
                                                            : quadrature_tolerance_;
}

ValidationResult validate_model(const LikelihoodTable& likelihood) {
  ValidationResult result;
  const auto& space = likelihood.sample_space();
  const double tol = likelihood.normalization_tolerance();
  for (std::size_t j = 0; j < likelihood.num_parameters(); ++j) {
    bool entries_ok = true;
    double sum = 0.0;
    for (std::size_t i = 0; i < likelihood.num_outcomes(); ++i) {
      const double v = likelihood(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        result.violations.push_back({"entry " + format_number(v) + " is not a finite nonnegative value", i, j});
        entries_ok = false;
        continue;
      }
      sum += space.weight(i) * v;
    }
    if (entries_ok && std::abs(sum - 1.0) > tol) {
      result.violations.push_back(
          {"column " + std::to_string(j) + " sum " + format_number(sum) + " != 1", std::nullopt, j});
    }
  }
  return result;
}

Prior::Prior(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ModelError("prior has no weights");
  double sum = 0.0;
  std::size_t nonzero = 0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw ModelError("prior weights must be finite and nonnegative");
    sum += w;
    if (w > 0.0) ++nonzero;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    throw ModelError("prior weights sum to " + format_number(sum) + ", not 1");
  }
  kind_ = nonzero == 1 ? PriorKind::kPointMass : PriorKind::kGeneral;
}

Prior Prior::point_mass(std::size_t num_parameters, std::size_t atom) {
  if (atom >= num_parameters) throw ModelError("point-mass atom out of range");
  std::vector<double> w(num_parameters, 0.0);
  w[atom] = 1.0;
  return Prior(std::move(w));
}

Prior Prior::uniform(std::size_t num_parameters, const std::vector<std::size_t>& support) {
  if (support.empty()) throw ModelError("uniform prior needs a non-empty support");
  std::vector<double> w(num_parameters, 0.0);
  const double mass = 1.0 / static_cast<double>(support.size());
  for (std::size_t i : support) {
    if (i >= num_parameters) throw ModelError("support index out of range");
    w[i] = mass;
  }
  return Prior(std::move(w));
}

std::optional<std::size_t> Prior::atom() const {
  if (kind_ != PriorKind::kPointMass) return std::nullopt;
  const auto it = std::find_if(weights_.begin(), weights_.end(), [](double w) { return w > 0.0; });
  return static_cast<std::size_t>(it - weights_.begin());
}

Hypothesis::Hypothesis(HypothesisLabel label, std::shared_ptr<const LikelihoodTable> likelihood,
                       Prior prior, std::vector<std::size_t> support)
    : label_(label), likelihood_(std::move(likelihood)), prior_(std::move(prior)), support_(std::move(support)) {
  if (!likelihood_) throw ModelError("hypothesis without a likelihood table");
  if (prior_.size() != likelihood_->num_parameters()) {
    throw ModelError("prior size does not match the parameter space");
  }
  if (support_.empty()) throw ModelError("hypothesis support is empty");
  for (std::size_t k = 0; k < support_.size(); ++k) {
    if (support_[k] >= prior_.size()) throw ModelError("support index out of range");
    if (k > 0 && support_[k] <= support_[k - 1]) throw ModelError("support must be sorted and unique");
  }
  for (std::size_t j = 0; j < prior_.size(); ++j) {
    if (prior_[j] > 0.0 && !in_support(j)) {
      throw ModelError("prior puts weight on parameter " + std::to_string(j) + " outside the support");
    }
  }
}

Hypothesis::Hypothesis(HypothesisLabel label, std::shared_ptr<const LikelihoodTable> likelihood, Prior prior)
    : Hypothesis(label, likelihood, prior, [&prior] {
        std::vector<std::size_t> s;
        for (std::size_t j = 0; j < prior.size(); ++j) {
          if (prior[j] > 0.0) s.push_back(j);
        }
        return s;
      }()) {}

bool Hypothesis::in_support(std::size_t parameter) const {
  return std::binary_search(support_.begin(), support_.end(), parameter);
}

Hypothesis Hypothesis::with_prior(Prior prior) const {
  return Hypothesis(label_, likelihood_, std::move(prior), support_);
}

Hypothesis restrict_hypothesis(const Hypothesis& h, std::vector<std::size_t> subset) {
  if (subset.empty()) throw PreconditionError("cannot restrict a hypothesis to an empty subset");
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  double mass = 0.0;
  for (std::size_t j : subset) {
    if (j >= h.prior().size()) throw PreconditionError("subset index out of range");
    mass += h.prior()[j];
  }
  if (!(mass > 0.0)) throw PreconditionError("prior has zero mass on the restriction subset");
  std::vector<double> w(h.prior().size(), 0.0);
  for (std::size_t j : subset) w[j] = h.prior()[j] / mass;
  return Hypothesis(h.label(), h.likelihood_ptr(), Prior(std::move(w)), std::move(subset));
}

bool same_sample_space(const Hypothesis& a, const Hypothesis& b) {
  return a.likelihood_ptr() == b.likelihood_ptr() || a.sample_space() == b.sample_space();
}

Statistic::Statistic(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw ModelError("statistic values must be finite");
  }
}

Statistic Statistic::from_labels(const SampleSpace& space) {
  std::vector<double> values;
  values.reserve(space.size());
  for (const auto& label : space.outcomes()) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), v);
    if (ec != std::errc() || ptr != label.data() + label.size()) {
      throw ModelError("outcome label '" + label + "' is not numeric");
    }
    values.push_back(v);
  }
  return Statistic(std::move(values));
}

}  // namespace bfnpt
