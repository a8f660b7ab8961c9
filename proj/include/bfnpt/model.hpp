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

// Sample spaces, parameter grids, likelihood tables, priors and hypotheses.
// Every type here is immutable once constructed.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bfnpt {

inline constexpr double kNormalizationTolerance = 1e-12;
inline constexpr double kDefaultQuadratureTolerance = 1e-6;

enum class SampleKind { kDiscreteExact, kQuadratureGrid };

class SampleSpace {
 public:
  // Discrete-exact space; every weight is 1.
  explicit SampleSpace(std::vector<std::string> outcomes);
  SampleSpace(std::vector<std::string> outcomes, std::vector<double> weights);

  std::size_t size() const { return outcomes_.size(); }
  SampleKind kind() const { return kind_; }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::string& outcome(std::size_t i) const { return outcomes_[i]; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }

  bool operator==(const SampleSpace&) const = default;

 private:
  std::vector<std::string> outcomes_;
  SampleKind kind_;
  std::vector<double> weights_;
};

class ParameterSpace {
 public:
  explicit ParameterSpace(std::vector<std::vector<double>> points);
  // Convenience for the one-dimensional case.
  static ParameterSpace grid(const std::vector<double>& values);

  std::size_t size() const { return points_.size(); }
  std::size_t dimension() const { return points_.front().size(); }
  const std::vector<double>& point(std::size_t i) const { return points_[i]; }
  const std::vector<std::vector<double>>& points() const { return points_; }

  // True when dimension() == 1 and coordinates strictly increase.
  bool is_increasing_1d() const;
  // Coordinate of a 1-D point; throws PreconditionError for dimension > 1.
  double coordinate(std::size_t i) const;

  bool operator==(const ParameterSpace&) const = default;

 private:
  std::vector<std::vector<double>> points_;
};

// p(outcome | parameter point). Stored column-major: each parameter point
// owns a contiguous column over the sample space.
class LikelihoodTable {
 public:
  // columns[j][i] = p(outcome i | parameter j). Only the shape is checked
  // here; numeric invariants are reported by validate_model().
  LikelihoodTable(SampleSpace sample_space, ParameterSpace parameter_space,
                  const std::vector<std::vector<double>>& columns,
                  double quadrature_tolerance = kDefaultQuadratureTolerance);

  const SampleSpace& sample_space() const { return sample_space_; }
  const ParameterSpace& parameter_space() const { return parameter_space_; }
  std::size_t num_outcomes() const { return sample_space_.size(); }
  std::size_t num_parameters() const { return parameter_space_.size(); }
  double quadrature_tolerance() const { return quadrature_tolerance_; }

  double operator()(std::size_t outcome, std::size_t parameter) const {
    return values_[parameter * num_outcomes() + outcome];
  }
  std::span<const double> column(std::size_t parameter) const {
    return {values_.data() + parameter * num_outcomes(), num_outcomes()};
  }

  // Tolerance applied to the weighted column sums.
  double normalization_tolerance() const;

 private:
  SampleSpace sample_space_;
  ParameterSpace parameter_space_;
  std::vector<double> values_;
  double quadrature_tolerance_;
};

struct Violation {
  std::string message;
  std::optional<std::size_t> outcome;
  std::optional<std::size_t> parameter;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks entry finiteness/nonnegativity and column normalization. Never throws.
ValidationResult validate_model(const LikelihoodTable& likelihood);

enum class PriorKind { kGeneral, kPointMass };

class Prior {
 public:
  // Weights over every parameter point; must be nonnegative and sum to 1.
  explicit Prior(std::vector<double> weights);

  static Prior point_mass(std::size_t num_parameters, std::size_t atom);
  static Prior uniform(std::size_t num_parameters, const std::vector<std::size_t>& support);

  PriorKind kind() const { return kind_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }
  // The single nonzero index of a point-mass prior.
  std::optional<std::size_t> atom() const;

 private:
  std::vector<double> weights_;
  PriorKind kind_;
};

enum class HypothesisLabel { kNull, kAlternative };

class Hypothesis {
 public:
  // support must be sorted, unique and in range; the prior must vanish off it.
  Hypothesis(HypothesisLabel label, std::shared_ptr<const LikelihoodTable> likelihood,
             Prior prior, std::vector<std::size_t> support);
  // Support defaults to the indices where the prior is nonzero.
  Hypothesis(HypothesisLabel label, std::shared_ptr<const LikelihoodTable> likelihood,
             Prior prior);

  HypothesisLabel label() const { return label_; }
  const LikelihoodTable& likelihood() const { return *likelihood_; }
  const std::shared_ptr<const LikelihoodTable>& likelihood_ptr() const { return likelihood_; }
  const SampleSpace& sample_space() const { return likelihood_->sample_space(); }
  const Prior& prior() const { return prior_; }
  const std::vector<std::size_t>& support() const { return support_; }
  bool in_support(std::size_t parameter) const;
  bool is_simple() const { return prior_.kind() == PriorKind::kPointMass; }

  // Same hypothesis with the prior replaced (support kept, prior must fit it).
  Hypothesis with_prior(Prior prior) const;

 private:
  HypothesisLabel label_;
  std::shared_ptr<const LikelihoodTable> likelihood_;
  Prior prior_;
  std::vector<std::size_t> support_;
};

// Prior renormalized over subset; the result's support is subset.
Hypothesis restrict_hypothesis(const Hypothesis& h, std::vector<std::size_t> subset);

// True when both hypotheses live on the same sample space.
bool same_sample_space(const Hypothesis& a, const Hypothesis& b);

// One finite real per outcome.
class Statistic {
 public:
  explicit Statistic(std::vector<double> values);
  // Parses each outcome label as a number.
  static Statistic from_labels(const SampleSpace& space);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

}  // namespace bfnpt
