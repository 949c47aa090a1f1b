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

// Closed-form pairwise Bayes factors for the regression of column i on
// column j:  X_i | X_j ~ N_n(a X_j, tau^2 I_n),
//   a | tau^2 ~ N(0, tau^2 / (gamma ||X_j||^2)).
//
// One-sample (H0: a = 0, tau^2 = 1) with tau^2 ~ IG(a0, b0):
//   log B = a0 log b0 - lgamma(a0) + 0.5 log(gamma/(1+gamma)) + lgamma(n/2 + a0)
//           + ||X_i||^2 / 2 - (n/2 + a0) log(n tau_{ij,gamma}^2 / 2 + b0)
//
// Independence (H0: a = 0) with pi(tau^2) ~ 1/tau^2 under both hypotheses:
//   log B = 0.5 log(gamma/(1+gamma)) - (n/2) log(tau_{ij,gamma}^2 / tau_i^2)
//
// Everything is on the natural-log scale; consumers double it.

#pragma once

#include <optional>

#include "mxpbf/pairstats.hpp"

namespace mxpbf {

/// Finite stand-in for +inf on collinear pairs, so max/sort stay total orders.
inline constexpr double kLogBfSentinel = 1e300;
/// The sentinel on the 2 log BF scale. A threshold equal to this selects nothing.
inline constexpr double kDevianceCap = 2.0 * kLogBfSentinel;

enum class TestKind { one_sample, diagonality, support, pairwise_independence };
enum class GammaMode { max_np, n_only };

struct HyperParams {
  double a0 = 2.0001;
  double K = 100.0;
  double alpha = 1.0;
  double gamma = 0.5;
  GammaMode gamma_mode = GammaMode::max_np;
  /// When set, replaces the per-pair policy b0_ij = tau_{ij,0}^2 (a0 - 1).
  std::optional<double> b0_override;
};

/// a0 = 2 + K^-2; alpha = 8.01(1 - 1/ln n) for one_sample and
/// 4.01(1 - 1/ln n) otherwise; gamma = (n v p)^-alpha, or n^-alpha for the
/// single-pair test. Throws invalid_parameter when ln n <= 1 or K <= 0.
HyperParams default_hyperparams(Index n, Index p, TestKind test, double K = 100.0);

double default_alpha(Index n, TestKind test);
double gamma_from_alpha(Index n, Index p, double alpha, GammaMode mode);

/// Recomputes gamma after changing alpha (keeps gamma_mode).
HyperParams with_alpha(HyperParams hp, Index n, Index p, double alpha);

struct LogBF {
  double value = 0.0;
  Index i = -1;
  Index j = -1;
  bool collinear_overflow = false;
};

/// Per-test constants hoisted out of the pair loop.
class OneSampleScorer {
 public:
  OneSampleScorer(const GramCache& cache, const HyperParams& hp);
  /// Unchecked: i != j and both in range.
  LogBF operator()(Index i, Index j) const noexcept;

 private:
  const GramCache* cache_;
  HyperParams hp_;
  double half_n_;
  double constant_;  // -lgamma(a0) + 0.5 log(g/(1+g)) + lgamma(n/2 + a0)
  double shape_;     // n/2 + a0
};

class DiagScorer {
 public:
  DiagScorer(const GramCache& cache, double gamma);
  LogBF operator()(Index i, Index j) const noexcept;

 private:
  const GramCache* cache_;
  double gamma_;
  double half_n_;
  double prior_term_;    // 0.5 log(g/(1+g))
  double log1p_gamma_;
};

LogBF log_bf_one_sample(const GramCache& cache, Index i, Index j, const HyperParams& hp);
LogBF log_bf_diag(const GramCache& cache, Index i, Index j, double gamma);

/// 0.5 log(gamma / (1 + gamma)), computed without cancellation for small gamma.
double log_prior_ratio(double gamma);

}  // namespace mxpbf
