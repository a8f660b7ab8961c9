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

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "bfnpt/errors.hpp"
#include "bfnpt/families.hpp"
#include "bfnpt/np_oracle.hpp"
#include "bfnpt/random_models.hpp"
#include "support/oracles.hpp"

namespace bfnpt {
namespace {

std::shared_ptr<const LikelihoodTable> binomial(int n, std::vector<double> grid) {
  return std::make_shared<const LikelihoodTable>(binomial_table(n, grid));
}

std::vector<double> predictive(const Hypothesis& h) {
  const auto& t = h.likelihood();
  std::vector<double> m(t.num_outcomes(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j : h.support()) m[i] += h.prior()[j] * t(i, j);
  }
  return m;
}

TEST(ExhaustiveSearch, IdenticalHypotheses) {
  auto t = std::make_shared<const LikelihoodTable>(SampleSpace({"a", "b"}), ParameterSpace::grid({0.0}),
                                                   std::vector<std::vector<double>>{{0.3, 0.7}});
  Hypothesis h(HypothesisLabel::kNull, t, Prior({1.0}));
  for (double budget : {0.0, 0.3, 0.5, 0.7, 1.0}) {
    const auto r = exhaustive_search(h, h, budget, ErrorCriterion::kExpected);
    EXPECT_DOUBLE_EQ(r.power, r.error);
  }
  EXPECT_FALSE(verify_np_optimality(h, h, 0.3, ErrorCriterion::kExpected, RegionMode::kDeterministicConservative)
                   .witness.has_value());
}

TEST(ExhaustiveSearch, BinomialThreeTrials) {
  auto t = binomial(3, {0.5, 0.8});
  Hypothesis h0(HypothesisLabel::kNull, t, Prior::point_mass(2, 0), {0});
  Hypothesis h1(HypothesisLabel::kAlternative, t, Prior::point_mass(2, 1), {1});
  const auto r = exhaustive_search(h0, h1, 0.125, ErrorCriterion::kExpected);
  EXPECT_EQ(r.mask, 0b1000u);
  EXPECT_NEAR(r.power, 0.512, 1e-15);
  EXPECT_EQ(r.regions_searched, 16u);
}

TEST(ExhaustiveSearch, CompositeAlternative) {
  auto t = binomial(5, {0.5, 0.6, 0.8});
  Hypothesis h0(HypothesisLabel::kNull, t, Prior::point_mass(3, 0), {0});
  Hypothesis h1(HypothesisLabel::kAlternative, t, Prior::uniform(3, {1, 2}));
  for (auto arithmetic : {Arithmetic::kDouble, Arithmetic::kRational}) {
    const auto r = exhaustive_search(h0, h1, 0.03125, ErrorCriterion::kExpected, {0, arithmetic});
    EXPECT_EQ(r.mask, 0b100000u);
    EXPECT_NEAR(r.power, (std::pow(0.6, 5) + std::pow(0.8, 5)) / 2, 1e-15);
    EXPECT_EQ(r.exact, arithmetic == Arithmetic::kRational);
  }
}

TEST(ExhaustiveSearch, TooManyOutcomes) {
  auto t = binomial(22, {0.5, 0.6});
  Hypothesis h0(HypothesisLabel::kNull, t, Prior::point_mass(2, 0), {0});
  Hypothesis h1(HypothesisLabel::kAlternative, t, Prior::point_mass(2, 1), {1});
  EXPECT_THROW(exhaustive_search(h0, h1, 0.05, ErrorCriterion::kExpected), PreconditionError);
}

TEST(ExhaustiveSearch, IndependentOfWorkerCount) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = random_discrete_model(seed);
    const auto a = exhaustive_search(m.null, m.alternative, 0.1, ErrorCriterion::kMaximum, {1});
    const auto b = exhaustive_search(m.null, m.alternative, 0.1, ErrorCriterion::kMaximum, {5});
    EXPECT_EQ(a.mask, b.mask);
    EXPECT_EQ(a.power, b.power);
  }
}

TEST(RandomizedSolution, Budgets) {
  auto t = std::make_shared<const LikelihoodTable>(SampleSpace({"a", "b", "c"}), ParameterSpace::grid({0.0, 1.0}),
                                                   std::vector<std::vector<double>>{{0.6, 0.4, 0.0}, {0.1, 0.5, 0.4}});
  Hypothesis h0(HypothesisLabel::kNull, t, Prior::point_mass(2, 0), {0});
  Hypothesis h1(HypothesisLabel::kAlternative, t, Prior::point_mass(2, 1), {1});
  EXPECT_NEAR(randomized_np_solution(h0, h1, 0.0).power, 0.4, 1e-15);
  EXPECT_NEAR(randomized_np_solution(h0, h1, 1.0).power, 1.0, 1e-15);
}

TEST(RandomizedSolution, BinomialLinearProgram) {
  auto t = binomial(5, {0.5, 0.8});
  Hypothesis h0(HypothesisLabel::kNull, t, Prior::point_mass(2, 0), {0});
  Hypothesis h1(HypothesisLabel::kAlternative, t, Prior::point_mass(2, 1), {1});
  const auto s = randomized_np_solution(h0, h1, 0.05);
  const double expected = std::pow(0.8, 5) + 0.12 * 5 * std::pow(0.8, 4) * 0.2;
  EXPECT_NEAR(s.power, expected, 1e-12);
  EXPECT_NEAR(s.region[4], 0.12, 1e-12);
  EXPECT_NEAR(testing::lp_vertex_power(predictive(h0), predictive(h1), 0.05), expected, 1e-12);
}

TEST(RandomizedSolution, ConcaveNondecreasingInBudget) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto m = random_discrete_model(seed);
    std::vector<double> p;
    for (int k = 0; k <= 20; ++k) p.push_back(randomized_np_solution(m.null, m.alternative, k / 20.0).power);
    for (std::size_t k = 1; k < p.size(); ++k) EXPECT_GE(p[k], p[k - 1] - 1e-12);
    for (std::size_t k = 1; k + 1 < p.size(); ++k) EXPECT_GE(2 * p[k], p[k - 1] + p[k + 1] - 1e-12);
  }
}

TEST(Verify, SimpleGaussianGrid) {
  // Coarse grid keeps the sample space within the oracle cap.
  auto t = std::make_shared<const LikelihoodTable>(gaussian_location_table({0.0, 1.0}, 1.0, {-5.0, 6.0, 12}, 1e-3));
  Hypothesis h0(HypothesisLabel::kNull, t, Prior::point_mass(2, 0), {0});
  Hypothesis h1(HypothesisLabel::kAlternative, t, Prior::point_mass(2, 1), {1});
  for (auto mode : {RegionMode::kDeterministicConservative, RegionMode::kRandomizedExact}) {
    EXPECT_EQ(verify_np_optimality(h0, h1, 0.05, ErrorCriterion::kExpected, mode).verdict, Verdict::kOptimal);
  }
}

TEST(Verify, CompositeBinomialCases) {
  auto t = binomial(5, {0.4, 0.5, 0.6, 0.8});
  Hypothesis h0(HypothesisLabel::kNull, t, Prior::uniform(4, {0, 1}));
  Hypothesis h1(HypothesisLabel::kAlternative, t, Prior::uniform(4, {2, 3}));
  for (auto criterion : {ErrorCriterion::kExpected, ErrorCriterion::kMaximum}) {
    for (auto mode : {RegionMode::kDeterministicConservative, RegionMode::kRandomizedExact}) {
      for (double target : {0.01, 0.05, 0.2}) {
        const auto r = verify_np_optimality(h0, h1, target, criterion, mode);
        EXPECT_EQ(r.verdict, Verdict::kOptimal) << to_json(r).dump();
      }
    }
  }
}

TEST(Verify, SimpleNullCriteriaAgree) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto m = random_discrete_model(seed);
    const std::size_t atom = m.null.support().front();
    Hypothesis h0(HypothesisLabel::kNull, m.table, Prior::point_mass(m.table->num_parameters(), atom), {atom});
    for (auto mode : {RegionMode::kDeterministicConservative, RegionMode::kRandomizedExact}) {
      const auto a = verify_np_optimality(h0, m.alternative, 0.1, ErrorCriterion::kExpected, mode);
      const auto b = verify_np_optimality(h0, m.alternative, 0.1, ErrorCriterion::kMaximum, mode);
      EXPECT_EQ(a.verdict, b.verdict);
      EXPECT_NEAR(a.region_power, b.region_power, 1e-15);
      const auto ra = calibrate_threshold(bayes_factor(m.alternative, h0), h0, 0.1, ErrorCriterion::kExpected, mode);
      const auto rb = calibrate_sharp_null(m.alternative, h0, 0.1, mode).calibration;
      EXPECT_EQ(ra.region.reject_probability, rb.region.reject_probability) << "seed " << seed;
    }
  }
}

TEST(Verify, WrongStatisticIsDominated) {
  const auto cert = search_adversarial_witness(1, 200, 0.1);
  ASSERT_TRUE(cert.passed) << to_json(cert).dump();
  ASSERT_TRUE(cert.detail.contains("model_seed"));
  EXPECT_TRUE(cert.detail["oracle"].contains("witness"));
}

TEST(Verify, RationalDoubleAgreeOnVerdict) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto m = random_discrete_model(seed);
    const auto a = verify_np_optimality(m.null, m.alternative, 0.1, ErrorCriterion::kExpected,
                                        RegionMode::kDeterministicConservative, {0, Arithmetic::kDouble});
    const auto b = verify_np_optimality(m.null, m.alternative, 0.1, ErrorCriterion::kExpected,
                                        RegionMode::kDeterministicConservative, {0, Arithmetic::kRational});
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_NEAR(a.best_power, b.best_power, 1e-12);
  }
}

class OracleSweep : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(OracleSweep, BayesFactorRegionIsOptimal) {
  const auto m = random_discrete_model(GetParam());
  const auto lb = bayes_factor(m.alternative, m.null);
  const auto m0 = predictive(m.null), m1 = predictive(m.alternative);
  for (double s : {0.02, 0.1, 0.3}) {
    const auto c = calibrate_threshold(lb, m.null, s, ErrorCriterion::kExpected, RegionMode::kRandomizedExact);
    const double power = region_probability(c.region, m.alternative).total;
    EXPECT_NEAR(power, testing::lp_vertex_power(m0, m1, c.attained), 1e-9);
    const auto brute = testing::brute_force_region({m0}, m1, c.attained);
    EXPECT_GE(power, brute.power - 1e-9);
    const auto det = calibrate_threshold(lb, m.null, s, ErrorCriterion::kExpected,
                                         RegionMode::kDeterministicConservative);
    const auto search = exhaustive_search(m.null, m.alternative, det.attained, ErrorCriterion::kExpected);
    EXPECT_NEAR(search.power, testing::brute_force_region({m0}, m1, det.attained).power, 1e-12);
  }
}

TEST_P(OracleSweep, MaximumCriterionSearchMatchesBruteForce) {
  const auto m = random_discrete_model(GetParam());
  std::vector<std::vector<double>> cols;
  for (std::size_t j : m.null.support()) {
    const auto c = m.table->column(j);
    cols.emplace_back(c.begin(), c.end());
  }
  const auto r = exhaustive_search(m.null, m.alternative, 0.1, ErrorCriterion::kMaximum);
  EXPECT_NEAR(r.power, testing::brute_force_region(cols, predictive(m.alternative), 0.1).power, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Seeds, OracleSweep, ::testing::Range<std::uint64_t>(0, 40));

}  // namespace
}  // namespace bfnpt
