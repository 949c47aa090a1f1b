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

#include "mxpbf/hyptest.hpp"

#include <cmath>
#include <numbers>

#include "mxpbf/error.hpp"
#include "mxpbf/kernels.hpp"

namespace mxpbf {

namespace {

// (8 pi)^{-1/2}
const double kGumbelScale = 1.0 / std::sqrt(8.0 * std::numbers::pi);

void require_dimension(Index p) {
  if (p < 2) throw Error(ErrorKind::invalid_parameter, "test needs at least two variables");
}

TestOutcome finish(const kernels::PairMax& best, Index n, Index p, const HyperParams& hp,
                   double threshold) {
  if (best.scored > 0 && best.flagged == best.scored) {
    throw Error(ErrorKind::collinearity, "every scanned pair is numerically collinear");
  }
  TestOutcome out;
  out.statistic = (best.value >= kLogBfSentinel) ? kDevianceCap : 2.0 * best.value;
  out.argmax = {best.i, best.j};
  out.threshold_used = threshold;
  out.decision = out.statistic > threshold ? Decision::reject_null : Decision::retain_null;
  out.n = n;
  out.p = p;
  out.gamma = hp.gamma;
  out.alpha = hp.alpha;
  out.collinear_pairs = best.flagged;
  if (best.flagged > 0) {
    out.warnings.push_back(std::to_string(best.flagged) +
                           " collinear pair(s) scored with the capped sentinel");
  }
  return out;
}

}  // namespace

TestOutcome one_sample_test(const GramCache& cache, const HyperParams& hp, double threshold) {
  require_dimension(cache.p());
  const OneSampleScorer score(cache, hp);
  const auto best = kernels::max_over_pairs_parallel(cache.p(), kernels::PairSet::ordered, score);
  return finish(best, cache.n(), cache.p(), hp, threshold);
}

TestOutcome one_sample_test(const DataMatrix& data, const HyperParams& hp, double threshold) {
  require_dimension(data.p());
  return one_sample_test(build_gram(data), hp, threshold);
}

TestOutcome diagonality_test(const GramCache& cache, const HyperParams& hp,
                             const DecisionRule& rule) {
  require_dimension(cache.p());
  const DiagScorer score(cache, hp.gamma);
  const auto best =
      kernels::max_over_pairs_parallel(cache.p(), kernels::PairSet::unordered, score);

  if (const auto* fixed = std::get_if<ThresholdRule>(&rule)) {
    return finish(best, cache.n(), cache.p(), hp, fixed->value);
  }
  const double size = std::get<AsymptoticSizeRule>(rule).size;
  if (!(size > 0.0 && size < 1.0)) {
    throw Error(ErrorKind::invalid_parameter, "asymptotic size must lie in (0, 1)");
  }
  const double centre = c_np(cache.n(), cache.p(), hp.gamma);
  TestOutcome out = finish(best, cache.n(), cache.p(), hp, centre + gumbel_quantile(1.0 - size));
  out.pvalue = gumbel_sf(out.statistic - centre);
  if (cache.p() < kGumbelMinDimension) {
    out.warnings.push_back("p < " + std::to_string(kGumbelMinDimension) +
                           ": extreme-value calibration may be inaccurate");
  }
  return out;
}

TestOutcome diagonality_test(const DataMatrix& data, const HyperParams& hp,
                             const DecisionRule& rule) {
  require_dimension(data.p());
  return diagonality_test(build_gram(data), hp, rule);
}

TestOutcome pairwise_independence_test(const DataMatrix& data, Index i, Index j,
                                       const HyperParams& hp, double threshold) {
  if (i < 0 || j < 0 || i >= data.p() || j >= data.p() || i == j) {
    throw Error(ErrorKind::invalid_pair, "pair requires distinct in-range columns");
  }
  Eigen::MatrixXd two(data.n(), 2);
  two.col(0) = data.values().col(i);
  two.col(1) = data.values().col(j);
  const GramCache cache = build_gram(two);
  const DiagScorer score(cache, hp.gamma);

  // Score (i | j) first; (j | i) wins only when strictly larger.
  const LogBF forward = score(0, 1);
  const LogBF backward = score(1, 0);
  const bool swap = backward.value > forward.value;
  const LogBF& best = swap ? backward : forward;
  const Index flagged = (forward.collinear_overflow ? 1 : 0) + (backward.collinear_overflow ? 1 : 0);

  // A single collinear pair is evidence, not an error.
  TestOutcome out;
  out.statistic = best.collinear_overflow ? kDevianceCap : 2.0 * best.value;
  out.argmax = swap ? std::pair{j, i} : std::pair{i, j};
  out.threshold_used = threshold;
  out.decision = out.statistic > threshold ? Decision::reject_null : Decision::retain_null;
  out.n = data.n();
  out.p = 2;
  out.gamma = hp.gamma;
  out.alpha = hp.alpha;
  out.collinear_pairs = flagged;
  if (flagged > 0) out.warnings.push_back("pair is numerically collinear");
  return out;
}

TestOutcome pairwise_independence_test(const DataMatrix& data, Index i, Index j,
                                       double alpha_exp, double threshold) {
  HyperParams hp;
  hp.gamma_mode = GammaMode::n_only;
  hp = with_alpha(hp, data.n(), 2, alpha_exp);
  return pairwise_independence_test(data, i, j, hp, threshold);
}

double c_np(Index n, Index p, double gamma) {
  (void)n;  // the constant depends on n only through gamma
  if (p < 2) throw Error(ErrorKind::domain, "c_np requires p >= 2");
  const double log_p = std::log(static_cast<double>(p));
  // The doubled statistic carries the full log(gamma/(1+gamma)); centring
  // with half of it leaves a shift of 0.5 log(gamma) in the limit.
  return 2.0 * log_prior_ratio(gamma) + 4.0 * log_p - std::log(log_p);
}

double gumbel_cdf(double z) { return std::exp(-kGumbelScale * std::exp(-0.5 * z)); }

double gumbel_sf(double z) { return -std::expm1(-kGumbelScale * std::exp(-0.5 * z)); }

double gumbel_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw Error(ErrorKind::domain, "quantile level must lie in (0, 1)");
  return -2.0 * std::log(-std::log(u) / kGumbelScale);
}

}  // namespace mxpbf
