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

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mxpbf/bayesfactor.hpp"

namespace mxpbf {

enum class Decision { reject_null, retain_null };

struct TestOutcome {
  double statistic = 0.0;  // max of 2 log BF over the scanned pairs
  std::pair<Index, Index> argmax{-1, -1};
  Decision decision = Decision::retain_null;
  std::optional<double> pvalue;
  double threshold_used = 0.0;
  Index n = 0;
  Index p = 0;
  double gamma = 0.0;
  double alpha = 0.0;
  Index collinear_pairs = 0;
  std::vector<std::string> warnings;
};

struct ThresholdRule {
  double value = 0.0;
};
/// Reject at asymptotic size `size` via the extreme-value limit of the max.
struct AsymptoticSizeRule {
  double size = 0.05;
};
using DecisionRule = std::variant<ThresholdRule, AsymptoticSizeRule>;

/// max over ordered pairs i != j of 2 log B_10 (the one-sample factor is not
/// symmetric in i, j).
TestOutcome one_sample_test(const GramCache& cache, const HyperParams& hp,
                            double threshold = 0.0);
TestOutcome one_sample_test(const DataMatrix& data, const HyperParams& hp,
                            double threshold = 0.0);

/// max over unordered pairs i < j of 2 log B~_10.
TestOutcome diagonality_test(const GramCache& cache, const HyperParams& hp,
                             const DecisionRule& rule = ThresholdRule{});
TestOutcome diagonality_test(const DataMatrix& data, const HyperParams& hp,
                             const DecisionRule& rule = ThresholdRule{});

/// Single pair, both orderings, gamma = n^-alpha_exp.
TestOutcome pairwise_independence_test(const DataMatrix& data, Index i, Index j,
                                       double alpha_exp, double threshold = 0.0);
/// Same with explicit hyperparameters (hp.gamma used as is).
TestOutcome pairwise_independence_test(const DataMatrix& data, Index i, Index j,
                                       const HyperParams& hp, double threshold = 0.0);

/// Centering constant log(gamma/(1+gamma)) + 4 log p - log log p. Needs p >= 2.
double c_np(Index n, Index p, double gamma);

/// F(z) = exp(-(8 pi)^{-1/2} exp(-z/2)).
double gumbel_cdf(double z);
/// 1 - F(z) without cancellation in the upper tail.
double gumbel_sf(double z);
/// F^{-1}(u) = -2 log(sqrt(8 pi) (-log u)), u in (0, 1).
double gumbel_quantile(double u);

/// Dimension below which the extreme-value approximation is flagged.
inline constexpr Index kGumbelMinDimension = 50;

}  // namespace mxpbf
