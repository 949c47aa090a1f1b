/*
 * Copyright 2026 The mxpbf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mxpbf/hyptest.hpp"
#include "mxpbf/parallel.hpp"
#include "mxpbf/simulate.hpp"
#include "testutil.hpp"

namespace mxpbf {
namespace {

DataMatrix columns3() {
  // (1,2,3), (1,1,1) and a column orthogonal to both.
  Eigen::MatrixXd x(3, 3);
  x << 1, 1, 1, 2, 1, -2, 3, 1, 1;
  return DataMatrix(x);
}

// Bisection on the cdf, independent of the closed-form quantile.
double bisect_quantile(double u) {
  double lo = -50.0;
  double hi = 200.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (gumbel_cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(OneSampleTest, TwoColumnStatisticIsMaxOfBothOrderings) {
  DataMatrix d(testing::random_normal(30, 2, 21));
  HyperParams hp = default_hyperparams(30, 2, TestKind::one_sample);
  const TestOutcome t = one_sample_test(d, hp);
  const GramCache c = build_gram(d);
  const double a = 2 * log_bf_one_sample(c, 0, 1, hp).value;
  const double b = 2 * log_bf_one_sample(c, 1, 0, hp).value;
  EXPECT_DOUBLE_EQ(t.statistic, std::max(a, b));
  EXPECT_EQ(t.argmax, (a >= b ? std::pair<Index, Index>{0, 1} : std::pair<Index, Index>{1, 0}));
  EXPECT_FALSE(t.pvalue.has_value());
}

TEST(OneSampleTest, SymmetricExampleRetains) {
  Eigen::MatrixXd x(2, 2);
  x << 1, 1, 1, -1;
  HyperParams hp;
  hp.a0 = 2.0;
  hp.b0_override = 1.0;
  hp.gamma = 1.0;
  const TestOutcome t = one_sample_test(DataMatrix(x), hp);
  EXPECT_NEAR(t.statistic, -1.465736, 1e-6);
  EXPECT_EQ(t.decision, Decision::retain_null);
  // Both orderings tie; the lexicographically smallest wins.
  EXPECT_EQ(t.argmax, (std::pair<Index, Index>{0, 1}));
}

TEST(OneSampleTest, NullRetainedMostOfTheTime) {
  const CovarianceSpec id = cov_identity(50);
  const HyperParams hp = default_hyperparams(200, 50, TestKind::one_sample);
  int retained = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const TestOutcome t = one_sample_test(sample_mvn(id, 200, 42, r), hp);
    retained += t.decision == Decision::retain_null;
  }
  EXPECT_GE(retained, 95);
}

TEST(OneSampleTest, AllCollinearIsAnError) {
  Eigen::MatrixXd x(4, 2);
  x << 1, 1, 2, 2, -1, -1, 3, 3;
  const HyperParams hp = default_hyperparams(4, 2, TestKind::one_sample);
  EXPECT_MXPBF_ERROR(one_sample_test(DataMatrix(x), hp), ErrorKind::collinearity);
}

TEST(OneSampleTest, SomeCollinearPairsForceRejectWithWarning) {
  Eigen::MatrixXd x = testing::random_normal(20, 3, 5);
  x.col(2) = x.col(0);
  const HyperParams hp = default_hyperparams(20, 3, TestKind::one_sample);
  const TestOutcome t = one_sample_test(DataMatrix(x), hp);
  EXPECT_EQ(t.statistic, kDevianceCap);
  EXPECT_EQ(t.decision, Decision::reject_null);
  EXPECT_EQ(t.collinear_pairs, 2);
  EXPECT_FALSE(t.warnings.empty());
}

TEST(OneSampleTest, NeedsTwoColumns) {
  DataMatrix d(testing::random_normal(10, 1, 1));
  EXPECT_MXPBF_ERROR(one_sample_test(d, HyperParams{}), ErrorKind::invalid_parameter);
}

TEST(OneSampleTest, SupersetNeverLowersStatistic) {
  Eigen::MatrixXd x = testing::random_normal(40, 12, 33);
  HyperParams hp = default_hyperparams(40, 12, TestKind::one_sample);
  const double full = one_sample_test(DataMatrix(x), hp).statistic;
  for (Index k = 2; k < 12; ++k) {
    EXPECT_GE(full, one_sample_test(DataMatrix(x.leftCols(k).eval()), hp).statistic);
  }
}

TEST(DiagonalityTest, OrthogonalColumns) {
  Eigen::MatrixXd x(4, 2);
  x << 1, 0, 0, 1, -1, 0, 0, -1;
  HyperParams hp;
  hp.gamma = 0.01;
  const TestOutcome t = diagonality_test(DataMatrix(x), hp);
  EXPECT_NEAR(t.statistic, std::log(0.01 / 1.01), 1e-14);
  EXPECT_EQ(t.decision, Decision::retain_null);
}

TEST(DiagonalityTest, ThreeColumnExample) {
  HyperParams hp;
  hp.gamma = 0.5;
  const TestOutcome t = diagonality_test(columns3(), hp);
  EXPECT_NEAR(t.statistic, 1.443281, 1e-6);
  EXPECT_EQ(t.argmax, (std::pair<Index, Index>{0, 1}));
  EXPECT_EQ(t.decision, Decision::reject_null);
}

TEST(DiagonalityTest, AsymptoticRuleAddsPvalueAndThreshold) {
  DataMatrix d(testing::random_normal(80, 10, 3));
  const HyperParams hp = default_hyperparams(80, 10, TestKind::diagonality);
  const TestOutcome t = diagonality_test(d, hp, AsymptoticSizeRule{0.05});
  ASSERT_TRUE(t.pvalue.has_value());
  const double centre = c_np(80, 10, hp.gamma);
  EXPECT_NEAR(t.threshold_used, centre + gumbel_quantile(0.95), 1e-12);
  EXPECT_NEAR(*t.pvalue, 1.0 - gumbel_cdf(t.statistic - centre), 1e-12);
  EXPECT_EQ(t.decision == Decision::reject_null, t.statistic > t.threshold_used);
  EXPECT_EQ(t.decision == Decision::reject_null, *t.pvalue < 0.05);
  EXPECT_FALSE(t.warnings.empty());  // p < 50

  EXPECT_MXPBF_ERROR(diagonality_test(d, hp, AsymptoticSizeRule{1.5}),
                     ErrorKind::invalid_parameter);
}

TEST(DiagonalityTest, PermutationMovesArgmaxOnly) {
  Eigen::MatrixXd x = testing::random_normal(50, 9, 8);
  x.col(6) += 0.8 * x.col(2);
  const HyperParams hp = default_hyperparams(50, 9, TestKind::diagonality);
  const TestOutcome base = diagonality_test(DataMatrix(x), hp);
  std::vector<Index> perm(9);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  Eigen::MatrixXd y(50, 9);
  for (Index k = 0; k < 9; ++k) y.col(k) = x.col(perm[k]);
  const TestOutcome moved = diagonality_test(DataMatrix(y), hp);
  EXPECT_NEAR(moved.statistic, base.statistic, 1e-10);
  const auto [a, b] = moved.argmax;
  EXPECT_EQ(std::min(perm[a], perm[b]), base.argmax.first);
  EXPECT_EQ(std::max(perm[a], perm[b]), base.argmax.second);
}

TEST(DiagonalityTest, ResultIndependentOfThreadCount) {
  Eigen::MatrixXd x = testing::random_normal(60, 70, 90);
  const HyperParams hp = default_hyperparams(60, 70, TestKind::diagonality);
  set_num_threads(1);
  const TestOutcome a = diagonality_test(DataMatrix(x), hp, AsymptoticSizeRule{});
  set_num_threads(7);
  const TestOutcome b = diagonality_test(DataMatrix(x), hp, AsymptoticSizeRule{});
  set_num_threads(0);
  EXPECT_EQ(a.statistic, b.statistic);
  EXPECT_EQ(a.argmax, b.argmax);
  EXPECT_EQ(*a.pvalue, *b.pvalue);
}

TEST(DiagonalityTest, SparseAlternativeDetected) {
  const CovarianceSpec s = cov_two_entry(200, 0.8);
  const HyperParams hp = default_hyperparams(100, 200, TestKind::diagonality);
  int rejected = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    rejected += diagonality_test(sample_mvn(s, 100, 5, r), hp).decision == Decision::reject_null;
  }
  EXPECT_GE(rejected, 95);
}

TEST(PairTest, OrthogonalRetains) {
  Eigen::MatrixXd x(4, 2);
  x << 1, 0, 0, 1, -1, 0, 0, -1;
  const TestOutcome t = pairwise_independence_test(DataMatrix(x), 0, 1, 2.0);
  const double g = std::pow(4.0, -2.0);
  EXPECT_NEAR(t.statistic, std::log(g / (1 + g)), 1e-14);
  EXPECT_EQ(t.decision, Decision::retain_null);
}

TEST(PairTest, CollinearRejects) {
  Eigen::MatrixXd x(2, 2);
  x << 1, 1, 3, 3;
  HyperParams hp;
  hp.gamma = 1.0;
  const TestOutcome t = pairwise_independence_test(DataMatrix(x), 0, 1, hp);
  EXPECT_NEAR(t.statistic, 0.693147, 1e-6);
  EXPECT_EQ(t.decision, Decision::reject_null);
}

TEST(PairTest, GammaIsNToMinusAlpha) {
  DataMatrix d(testing::random_normal(100, 3, 2));
  const TestOutcome t = pairwise_independence_test(d, 0, 2, 2.0);
  EXPECT_DOUBLE_EQ(t.gamma, 1e-4);
  EXPECT_EQ(t.alpha, 2.0);
  EXPECT_MXPBF_ERROR(pairwise_independence_test(d, 1, 1, 2.0), ErrorKind::invalid_pair);
  EXPECT_MXPBF_ERROR(pairwise_independence_test(d, 0, 3, 2.0), ErrorKind::invalid_pair);
}

TEST(CNp, ValueAndMonotonicity) {
  // gamma / (1 + gamma) = 1/2: log(1/2) + 4 log 3 - log log 3.
  const double expected = std::log(0.5) + 4 * std::log(3.0) - std::log(std::log(3.0));
  EXPECT_NEAR(c_np(10, 3, 1.0), expected, 1e-14);
  EXPECT_NEAR(c_np(10, 3, 1.0), 3.607254, 1e-6);
  EXPECT_LT(c_np(10, 3, 0.1), c_np(10, 3, 0.2));
  EXPECT_LT(c_np(10, 2, 0.1), c_np(10, 4, 0.1));
  EXPECT_MXPBF_ERROR(c_np(10, 1, 0.1), ErrorKind::domain);
}

TEST(Gumbel, CdfExamples) {
  const double z0 = -2.0 * std::log(std::sqrt(8.0 * std::numbers::pi));
  EXPECT_NEAR(z0, -3.224171, 1e-6);
  EXPECT_NEAR(gumbel_cdf(z0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(gumbel_cdf(1e4), 1.0, 1e-15);
  EXPECT_NEAR(gumbel_cdf(-1e3), 0.0, 1e-15);
  EXPECT_LT(gumbel_cdf(0.0), gumbel_cdf(0.1));
}

TEST(Gumbel, QuantileExamples) {
  EXPECT_NEAR(gumbel_quantile(0.95), bisect_quantile(0.95), 1e-10);
  EXPECT_NEAR(gumbel_quantile(0.95), 2.71619, 1e-4);
  EXPECT_NEAR(gumbel_quantile(std::exp(-1.0)), -3.224171, 1e-6);
  EXPECT_NEAR(gumbel_quantile(0.5), -2.491146, 1e-6);
  for (double u : {0.0, 1.0, -0.1, 2.0}) EXPECT_MXPBF_ERROR(gumbel_quantile(u), ErrorKind::domain);
}

TEST(Gumbel, RoundTripAndTail) {
  for (double u : {0.01, 0.5, 0.99}) EXPECT_NEAR(gumbel_cdf(gumbel_quantile(u)), u, 1e-12);
  // Upper tail keeps relative precision where 1 - cdf would cancel.
  const double z = 80.0;
  const double sf = gumbel_sf(z);
  EXPECT_GT(sf, 0.0);
  EXPECT_NEAR(sf, std::exp(-z / 2) / std::sqrt(8 * std::numbers::pi), 1e-12 * sf);
}

}  // namespace
}  // namespace mxpbf
