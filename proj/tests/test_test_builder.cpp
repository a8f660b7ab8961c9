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
#include <limits>
#include <memory>

#include "bfnpt/errors.hpp"
#include "bfnpt/families.hpp"
#include "bfnpt/random_models.hpp"
#include "bfnpt/test_builder.hpp"
#include "support/oracles.hpp"

namespace bfnpt {
namespace {

std::shared_ptr<const LikelihoodTable> binomial(int n, std::vector<double> grid) {
  return std::make_shared<const LikelihoodTable>(binomial_table(n, grid));
}

struct Simple {
  std::shared_ptr<const LikelihoodTable> table;
  Hypothesis h0;
  Hypothesis h1;
};

Simple simple_binomial(int n, double p0, double p1) {
  auto t = binomial(n, {p0, p1});
  return {t, Hypothesis(HypothesisLabel::kNull, t, Prior::point_mass(2, 0), {0}),
          Hypothesis(HypothesisLabel::kAlternative, t, Prior::point_mass(2, 1), {1})};
}

constexpr std::size_t kFive[] = {5};

TEST(RejectionRegion, Basics) {
  EXPECT_EQ(RejectionRegion::reject_none(3).threshold, std::numeric_limits<double>::infinity());
  EXPECT_TRUE(is_well_formed(RejectionRegion::reject_all(3)));
  RejectionRegion bad = RejectionRegion::reject_none(2);
  bad.reject_probability[0] = 0.5;
  EXPECT_FALSE(is_well_formed(bad));
  const std::vector<double> order{0.0, 1.0, 2.0};
  EXPECT_TRUE(is_superlevel_set(RejectionRegion::from_outcomes(3, std::vector<std::size_t>{1, 2}), order));
  EXPECT_FALSE(is_superlevel_set(RejectionRegion::from_outcomes(3, std::vector<std::size_t>{0, 2}), order));
}

TEST(RegionProbability, TrivialRegions) {
  const auto s = simple_binomial(5, 0.5, 0.8);
  EXPECT_NEAR(region_probability(RejectionRegion::reject_all(6), s.h0).total, 1.0, 1e-15);
  EXPECT_EQ(region_probability(RejectionRegion::reject_none(6), s.h1).total, 0.0);
}

TEST(RegionProbability, TopOutcome) {
  const auto s = simple_binomial(5, 0.5, 0.8);
  EXPECT_DOUBLE_EQ(region_probability(RejectionRegion::from_outcomes(6, kFive), s.h0).total, 0.03125);
}

TEST(MaxType1, SimpleNull) {
  const auto s = simple_binomial(5, 0.5, 0.8);
  const auto r = RejectionRegion::from_outcomes(6, kFive);
  const auto m = max_type1(r, s.h0);
  EXPECT_EQ(m.theta_hat, 0u);
  EXPECT_EQ(m.alpha_hat, region_probability(r, s.h0).total);
}

TEST(MaxType1, EmptyRegionPicksFirstSupportPoint) {
  auto t = binomial(5, {0.3, 0.4, 0.5});
  Hypothesis h0(HypothesisLabel::kNull, t, Prior::uniform(3, {1, 2}));
  const auto m = max_type1(RejectionRegion::reject_none(6), h0);
  EXPECT_EQ(m.alpha_hat, 0.0);
  EXPECT_EQ(m.theta_hat, 1u);
}

TEST(MaxType1, CompositeNullByHand) {
  auto t = binomial(5, {0.4, 0.5});
  Hypothesis h0(HypothesisLabel::kNull, t, Prior::uniform(2, {0, 1}));
  const auto m = max_type1(RejectionRegion::from_outcomes(6, kFive), h0);
  EXPECT_DOUBLE_EQ(m.alpha_hat, 0.03125);
  EXPECT_EQ(m.theta_hat, 1u);
  EXPECT_NEAR(region_probability(RejectionRegion::from_outcomes(6, kFive), h0).total,
              (std::pow(0.4, 5) + std::pow(0.5, 5)) / 2, 1e-16);
}

TEST(Calibrate, TargetOneRejectsAll) {
  const auto s = simple_binomial(5, 0.5, 0.8);
  const auto c = calibrate_threshold(bayes_factor(s.h1, s.h0), s.h0, 1.0, ErrorCriterion::kExpected,
                                     RegionMode::kDeterministicConservative);
  for (double r : c.region.reject_probability) EXPECT_EQ(r, 1.0);
  EXPECT_NEAR(c.attained, 1.0, 1e-15);
}

TEST(Calibrate, TargetZeroKeepsOnlyNullImpossibleOutcomes) {
  auto t = std::make_shared<const LikelihoodTable>(SampleSpace({"a", "b", "c"}), ParameterSpace::grid({0.0, 1.0}),
                                                   std::vector<std::vector<double>>{{0.6, 0.4, 0.0}, {0.2, 0.3, 0.5}});
  Hypothesis h0(HypothesisLabel::kNull, t, Prior::point_mass(2, 0), {0});
  Hypothesis h1(HypothesisLabel::kAlternative, t, Prior::point_mass(2, 1), {1});
  const auto c = calibrate_threshold(bayes_factor(h1, h0), h0, 0.0, ErrorCriterion::kExpected,
                                     RegionMode::kDeterministicConservative);
  EXPECT_EQ(c.region.reject_probability, (std::vector<double>{0.0, 0.0, 1.0}));
  EXPECT_EQ(c.attained, 0.0);
}

TEST(Calibrate, ConservativeBinomial) {
  const auto s = simple_binomial(5, 0.5, 0.8);
  const auto c = calibrate_threshold(bayes_factor(s.h1, s.h0), s.h0, 0.05, ErrorCriterion::kExpected,
                                     RegionMode::kDeterministicConservative);
  EXPECT_EQ(c.region.reject_probability, (std::vector<double>{0, 0, 0, 0, 0, 1}));
  EXPECT_DOUBLE_EQ(c.attained, 0.03125);
  // Adding k = 4 would overshoot.
  EXPECT_NEAR(0.03125 + testing::binomial_pmf(5, 4, 0.5), 0.1875, 1e-15);
}

TEST(Calibrate, RandomizedBinomial) {
  const auto s = simple_binomial(5, 0.5, 0.8);
  const auto c = calibrate_threshold(bayes_factor(s.h1, s.h0), s.h0, 0.05, ErrorCriterion::kExpected,
                                     RegionMode::kRandomizedExact);
  EXPECT_NEAR(c.region[4], 0.12, 1e-12);
  EXPECT_EQ(c.region[5], 1.0);
  EXPECT_NEAR(c.attained, 0.05, 1e-12);
  const double power = std::pow(0.8, 5) + 0.12 * 5 * std::pow(0.8, 4) * 0.2;
  EXPECT_NEAR(region_probability(c.region, s.h1).total, power, 1e-12);
}

TEST(Calibrate, StatisticThresholdOnTies) {
  // Outcomes 1 and 2 share a statistic value and must enter together.
  auto t = std::make_shared<const LikelihoodTable>(SampleSpace({"a", "b", "c"}), ParameterSpace::grid({0.0}),
                                                   std::vector<std::vector<double>>{{0.5, 0.25, 0.25}});
  Hypothesis h0(HypothesisLabel::kNull, t, Prior({1.0}));
  const Statistic stat({0.0, 1.0, 1.0});
  const auto det = calibrate_threshold(stat, h0, 0.3, ErrorCriterion::kExpected, RegionMode::kDeterministicConservative);
  EXPECT_EQ(det.region.reject_probability, (std::vector<double>{0, 0, 0}));
  const auto rnd = calibrate_threshold(stat, h0, 0.3, ErrorCriterion::kExpected, RegionMode::kRandomizedExact);
  EXPECT_NEAR(rnd.region[1], 0.6, 1e-12);
  EXPECT_EQ(rnd.region[1], rnd.region[2]);
}

TEST(SharpNull, MaximumCriterionOnCompositeNull) {
  auto t = binomial(5, {0.3, 0.5, 0.8});
  Hypothesis h0(HypothesisLabel::kNull, t, Prior::uniform(3, {0, 1}));
  Hypothesis h1(HypothesisLabel::kAlternative, t, Prior::point_mass(3, 2), {2});
  const auto c = calibrate_sharp_null(h1, h0, 0.05, RegionMode::kDeterministicConservative);
  EXPECT_TRUE(c.self_consistent);
  EXPECT_EQ(c.theta_hat, 1u);
  EXPECT_EQ(c.calibration.region.reject_probability, (std::vector<double>{0, 0, 0, 0, 0, 1}));
  EXPECT_DOUBLE_EQ(c.calibration.attained, 0.03125);
}

TEST(ErrorReportTest, PowerCurveAndSimpleNullIdentity) {
  auto t = binomial(5, {0.5, 0.6, 0.8});
  Hypothesis h0(HypothesisLabel::kNull, t, Prior::point_mass(3, 0), {0});
  Hypothesis h1(HypothesisLabel::kAlternative, t, Prior::uniform(3, {1, 2}));
  const auto e = error_report(RejectionRegion::from_outcomes(6, kFive), h0, h1);
  EXPECT_EQ(e.expected_alpha, e.max_alpha);
  ASSERT_EQ(e.power_curve.size(), 2u);
  EXPECT_NEAR(e.power_curve[0].power, std::pow(0.6, 5), 1e-15);
  EXPECT_NEAR(e.expected_power, (std::pow(0.6, 5) + std::pow(0.8, 5)) / 2, 1e-15);
}

TEST(WeightedRisk, HandValues) {
  const auto s = simple_binomial(3, 0.5, 0.8);
  const RiskWeights w{1.0, 1.0};
  EXPECT_NEAR(weighted_risk(RejectionRegion::reject_none(4), s.h0, s.h1, {0.3, 0.7}), 0.7, 1e-15);
  EXPECT_NEAR(weighted_risk(RejectionRegion::reject_all(4), s.h0, s.h1, {0.3, 0.7}), 0.3, 1e-15);
  const std::size_t three[] = {3};
  EXPECT_NEAR(weighted_risk(RejectionRegion::from_outcomes(4, three), s.h0, s.h1, w), 0.613, 1e-12);
}

TEST(WeightedRisk, MinimizerAgreesWithBruteForce) {
  const auto s = simple_binomial(3, 0.5, 0.8);
  const auto r = minimize_weighted_risk(s.h0, s.h1, {1.0, 1.0});
  EXPECT_EQ(r.reject_probability, (std::vector<double>{0, 0, 1, 1}));
  std::vector<double> m0, m1;
  for (int k = 0; k <= 3; ++k) {
    m0.push_back(testing::binomial_pmf(3, k, 0.5));
    m1.push_back(testing::binomial_pmf(3, k, 0.8));
  }
  std::uint64_t mask = 0;
  const double best = testing::brute_force_min_risk(m0, m1, 1.0, 1.0, &mask);
  EXPECT_EQ(mask, 0b1100u);
  EXPECT_NEAR(weighted_risk(r, s.h0, s.h1, {1.0, 1.0}), best, 1e-15);
}

TEST(WeightedRisk, ZeroWeights) {
  auto t = std::make_shared<const LikelihoodTable>(SampleSpace({"a", "b", "c"}), ParameterSpace::grid({0.0, 1.0}),
                                                   std::vector<std::vector<double>>{{0.6, 0.4, 0.0}, {0.0, 0.5, 0.5}});
  Hypothesis h0(HypothesisLabel::kNull, t, Prior::point_mass(2, 0), {0});
  Hypothesis h1(HypothesisLabel::kAlternative, t, Prior::point_mass(2, 1), {1});
  EXPECT_EQ(minimize_weighted_risk(h0, h1, {0.0, 1.0}).reject_probability, (std::vector<double>{0, 1, 1}));
  EXPECT_EQ(minimize_weighted_risk(h0, h1, {1.0, 0.0}).reject_probability, (std::vector<double>{0, 0, 1}));
  EXPECT_THROW(minimize_weighted_risk(h0, h1, {0.0, 0.0}), PreconditionError);
  EXPECT_THROW(minimize_weighted_risk(h0, h1, {-1.0, 1.0}), PreconditionError);
}

class RandomModels : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RandomModels, CalibrationInvariants) {
  const auto m = random_discrete_model(GetParam());
  const auto lb = bayes_factor(m.alternative, m.null);
  for (auto criterion : {ErrorCriterion::kExpected, ErrorCriterion::kMaximum}) {
    RejectionRegion prev = RejectionRegion::reject_none(lb.size());
    double prev_power = 0.0;
    for (double target : {0.0, 0.01, 0.05, 0.2, 0.5, 0.9, 1.0}) {
      const auto rnd = calibrate_threshold(lb, m.null, target, criterion, RegionMode::kRandomizedExact);
      const auto det = calibrate_threshold(lb, m.null, target, criterion, RegionMode::kDeterministicConservative);
      EXPECT_TRUE(is_well_formed(rnd.region));
      EXPECT_TRUE(is_superlevel_set(det.region, lb.values));
      EXPECT_LE(det.attained, target);
      EXPECT_LE(criterion_error(det.region, m.null, criterion), target);
      // Exact size unless every reachable outcome is already rejected.
      const double all = criterion_error(calibrate_threshold(lb, m.null, 1.0, criterion,
                                                             RegionMode::kRandomizedExact).region, m.null, criterion);
      EXPECT_NEAR(rnd.attained, std::min(target, all), 1e-12) << "target " << target;
      for (std::size_t i = 0; i < lb.size(); ++i) EXPECT_GE(rnd.region[i], prev[i]);
      const double power = region_probability(rnd.region, m.alternative).total;
      EXPECT_GE(power, prev_power - 1e-15);
      prev = rnd.region;
      prev_power = power;
      const auto e = error_report(rnd.region, m.null, m.alternative);
      EXPECT_LE(e.expected_alpha, e.max_alpha + 1e-15);
    }
  }
}

TEST_P(RandomModels, WeightedRiskEquivalence) {
  const auto m = random_discrete_model(GetParam());
  CounterRng rng(GetParam(), 11);
  const RiskWeights w{rng.uniform() + 0.05, rng.uniform() + 0.05};
  const auto r = minimize_weighted_risk(m.null, m.alternative, w);
  const double size = std::min(1.0, region_probability(r, m.null).total);
  const auto c = calibrate_threshold(bayes_factor(m.alternative, m.null), m.null, size, ErrorCriterion::kExpected,
                                     RegionMode::kRandomizedExact);
  EXPECT_NEAR(region_probability(c.region, m.alternative).total, region_probability(r, m.alternative).total, 1e-12);
  // The minimizer attains the brute-force minimum of W.
  std::vector<double> m0(r.size()), m1(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j : m.null.support()) m0[i] += m.null.prior()[j] * (*m.table)(i, j);
    for (std::size_t j : m.alternative.support()) m1[i] += m.alternative.prior()[j] * (*m.table)(i, j);
  }
  EXPECT_NEAR(weighted_risk(r, m.null, m.alternative, w), testing::brute_force_min_risk(m0, m1, w.w1, w.w2), 1e-12);
}

TEST_P(RandomModels, SimpleNullIdentity) {
  const auto m = random_discrete_model(GetParam());
  const std::size_t atom = m.null.support().front();
  Hypothesis h0(HypothesisLabel::kNull, m.table, Prior::point_mass(m.table->num_parameters(), atom), {atom});
  const auto c = calibrate_threshold(bayes_factor(m.alternative, h0), h0, 0.1, ErrorCriterion::kExpected,
                                     RegionMode::kRandomizedExact);
  const auto e = error_report(c.region, h0, m.alternative);
  EXPECT_EQ(e.expected_alpha, e.max_alpha);
  EXPECT_EQ(e.theta_hat, atom);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomModels, ::testing::Range<std::uint64_t>(0, 60));

}  // namespace
}  // namespace bfnpt
