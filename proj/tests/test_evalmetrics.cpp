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
#include <random>

#include "mxpbf/evalmetrics.hpp"
#include "mxpbf/hyptest.hpp"
#include "mxpbf/parallel.hpp"
#include "mxpbf/simulate.hpp"
#include "testutil.hpp"

namespace mxpbf {
namespace {

double mann_whitney(const std::vector<double>& null, const std::vector<double>& alt) {
  double wins = 0.0;
  for (double a : alt)
    for (double b : null) wins += (a > b) ? 1.0 : (a == b ? 0.5 : 0.0);
  return wins / (static_cast<double>(alt.size()) * static_cast<double>(null.size()));
}

double trapezoid(const RocCurve& r) {
  double area = 0.0;
  for (std::size_t k = 1; k < r.points.size(); ++k) {
    area += (r.points[k].first - r.points[k - 1].first) *
            (r.points[k].second + r.points[k - 1].second) / 2.0;
  }
  return area;
}

TEST(Roc, Examples) {
  EXPECT_EQ(roc_curve(std::vector<double>{0, 0}, std::vector<double>{1, 1}).auc, 1.0);
  const std::vector<double> same{0.3, 1.0, -2.0, 1.0};
  EXPECT_EQ(roc_curve(same, same).auc, 0.5);
  EXPECT_EQ(roc_curve(std::vector<double>{0.1, 0.4}, std::vector<double>{0.2, 0.8}).auc, 0.75);
}

TEST(Roc, EmptyInputIsDomainError) {
  EXPECT_MXPBF_ERROR(roc_curve(std::vector<double>{}, std::vector<double>{1.0}), ErrorKind::domain);
  EXPECT_MXPBF_ERROR(roc_curve(std::vector<double>{1.0}, std::vector<double>{}), ErrorKind::domain);
}

TEST(Roc, CurveShapeAndMannWhitney) {
  std::mt19937 gen(4);
  std::uniform_int_distribution<int> size(1, 100);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> null(static_cast<std::size_t>(size(gen)));
    std::vector<double> alt(static_cast<std::size_t>(size(gen)));
    // Rounding forces ties both within and across the lists.
    for (double& v : null) v = std::round(z(gen) * 3) / 3;
    for (double& v : alt) v = std::round((z(gen) + 0.7) * 3) / 3;
    const RocCurve r = roc_curve(null, alt);
    ASSERT_GE(r.points.size(), 2u);
    EXPECT_EQ(r.points.front(), (std::pair<double, double>{0.0, 0.0}));
    EXPECT_EQ(r.points.back(), (std::pair<double, double>{1.0, 1.0}));
    EXPECT_EQ(r.points.size(), r.thresholds.size());
    EXPECT_TRUE(std::isinf(r.thresholds.front()));
    for (std::size_t k = 1; k < r.points.size(); ++k) {
      EXPECT_GE(r.points[k].first, r.points[k - 1].first);
      EXPECT_GE(r.points[k].second, r.points[k - 1].second);
      EXPECT_LT(r.thresholds[k], r.thresholds[k - 1]);
    }
    EXPECT_NEAR(r.auc, mann_whitney(null, alt), 1e-12);
    EXPECT_NEAR(r.auc, trapezoid(r), 1e-12);
  }
}

TEST(Roc, InvariantUnderMonotoneTransform) {
  std::mt19937 gen(8);
  std::normal_distribution<double> z;
  std::vector<double> null(40), alt(30);
  for (double& v : null) v = z(gen);
  for (double& v : alt) v = z(gen) + 1.0;
  const RocCurve base = roc_curve(null, alt);
  const auto f = [](double v) { return std::exp(v) * 3.0 - 1.0; };
  std::vector<double> tn(null.size()), ta(alt.size());
  std::transform(null.begin(), null.end(), tn.begin(), f);
  std::transform(alt.begin(), alt.end(), ta.begin(), f);
  const RocCurve moved = roc_curve(tn, ta);
  EXPECT_EQ(moved.points, base.points);
  EXPECT_NEAR(moved.auc, base.auc, 1e-15);
}

TEST(KsDistance, QuantileGridIsClose) {
  const int m = 200;
  std::vector<double> s;
  for (int k = 1; k <= m; ++k) s.push_back(gumbel_quantile(k / (m + 1.0)));
  EXPECT_LE(ks_distance(s, gumbel_cdf), 1.0 / (m + 1.0) + 1e-12);
}

TEST(KsDistance, ConstantSample) {
  const std::vector<double> s(10, 0.5);
  const double f = gumbel_cdf(0.5);
  EXPECT_NEAR(ks_distance(s, gumbel_cdf), std::max(f, 1.0 - f), 1e-15);
}

TEST(KsDistance, GumbelDrawsWithinKolmogorovBand) {
  std::mt19937_64 gen(2718);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(500);
  for (double& v : s) {
    double w = 0.0;
    while (w <= 0.0) w = u(gen);
    v = gumbel_quantile(w);
  }
  EXPECT_LT(ks_distance(s, gumbel_cdf), 1.36 / std::sqrt(500.0));
}

TEST(KsDistance, InvariantUnderAffineMaps) {
  std::mt19937 gen(3);
  std::normal_distribution<double> z;
  std::vector<double> s(77);
  for (double& v : s) v = z(gen) * 2 - 1;
  const double base = ks_distance(s, gumbel_cdf);
  for (const auto [a, b] : {std::pair{2.0, 1.0}, std::pair{0.5, -3.0}}) {
    std::vector<double> t(s.size());
    std::transform(s.begin(), s.end(), t.begin(), [&](double v) { return a * v + b; });
    const double moved = ks_distance(t, [&](double x) { return gumbel_cdf((x - b) / a); });
    EXPECT_NEAR(moved, base, 1e-12);
  }
}

TEST(McNull, DeterministicAndBounded) {
  const HyperParams hp = default_hyperparams(60, 20, TestKind::diagonality);
  const auto one = mc_null_statistics(60, 20, hp, 1, 11);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one, mc_null_statistics(60, 20, hp, 1, 11));
  set_num_threads(3);
  const auto many = mc_null_statistics(60, 20, hp, 25, 11);
  set_num_threads(1);
  EXPECT_EQ(many, mc_null_statistics(60, 20, hp, 25, 11));
  set_num_threads(0);
  EXPECT_EQ(many.front(), one.front());
  for (double s : many) {
    EXPECT_TRUE(std::isfinite(s));
    EXPECT_GE(s, std::log(hp.gamma / (1 + hp.gamma)) - 1e-12);
  }
}

TEST(McNull, CentredMeanNearGumbelMean) {
  const HyperParams hp = default_hyperparams(200, 100, TestKind::diagonality);
  const auto stats = mc_null_statistics(200, 100, hp, 500, 7);
  const double centre = c_np(200, 100, hp.gamma);
  double mean = 0.0;
  for (double s : stats) mean += (s - centre) / 500.0;
  // Location -2 ln sqrt(8 pi), scale 2: mean is location + 2 * Euler gamma.
  const double limit_mean = -std::log(8.0 * std::numbers::pi) + 2.0 * std::numbers::egamma;
  EXPECT_NEAR(mean, limit_mean, 0.5);

  // Same check on direct Gumbel draws.
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(1e-12, 1.0);
  double gmean = 0.0;
  for (int k = 0; k < 500; ++k) gmean += gumbel_quantile(u(gen)) / 500.0;
  EXPECT_NEAR(mean, gmean, 0.5);
}

TEST(SimulateStatistics, MatchesDirectLoop) {
  const CovarianceSpec s = cov_two_entry(15, 0.5);
  const HyperParams hp = default_hyperparams(40, 15, TestKind::one_sample);
  const auto stats = simulate_statistics(s, 40, StatisticKind::one_sample, hp, 4, 21);
  ASSERT_EQ(stats.size(), 4u);
  MvnSampler sampler(s);
  for (std::size_t r = 0; r < 4; ++r) {
    const double want = one_sample_test(sampler.draw(40, 21, r), hp).statistic;
    EXPECT_EQ(stats[r], want);
  }
}

}  // namespace
}  // namespace mxpbf
