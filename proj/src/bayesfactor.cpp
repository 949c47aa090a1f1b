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

#include "mxpbf/bayesfactor.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "mxpbf/error.hpp"

namespace mxpbf {

double log_prior_ratio(double gamma) { return 0.5 * (std::log(gamma) - std::log1p(gamma)); }

double default_alpha(Index n, TestKind test) {
  const double log_n = std::log(static_cast<double>(n));
  if (!(log_n > 1.0)) {
    throw Error(ErrorKind::invalid_parameter, "sample size must satisfy ln n > 1 (n >= 3)");
  }
  const double coef = (test == TestKind::one_sample) ? 8.01 : 4.01;
  return coef * (1.0 - 1.0 / log_n);
}

double gamma_from_alpha(Index n, Index p, double alpha, GammaMode mode) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::invalid_parameter, "alpha must be positive");
  const double base = static_cast<double>(mode == GammaMode::n_only ? n : std::max(n, p));
  return std::pow(base, -alpha);
}

HyperParams default_hyperparams(Index n, Index p, TestKind test, double K) {
  if (!(K > 0.0)) throw Error(ErrorKind::invalid_parameter, "K must be positive");
  HyperParams hp;
  hp.K = K;
  hp.a0 = 2.0 + 1.0 / (K * K);
  hp.alpha = default_alpha(n, test);
  hp.gamma_mode =
      (test == TestKind::pairwise_independence) ? GammaMode::n_only : GammaMode::max_np;
  hp.gamma = gamma_from_alpha(n, p, hp.alpha, hp.gamma_mode);
  return hp;
}

HyperParams with_alpha(HyperParams hp, Index n, Index p, double alpha) {
  hp.alpha = alpha;
  hp.gamma = gamma_from_alpha(n, p, alpha, hp.gamma_mode);
  return hp;
}

OneSampleScorer::OneSampleScorer(const GramCache& cache, const HyperParams& hp)
    : cache_(&cache), hp_(hp) {
  if (!(hp.a0 > 0.0)) throw Error(ErrorKind::invalid_parameter, "a0 must be positive");
  if (!(hp.gamma > 0.0)) throw Error(ErrorKind::invalid_parameter, "gamma must be positive");
  half_n_ = 0.5 * static_cast<double>(cache.n());
  shape_ = half_n_ + hp.a0;
  constant_ = -boost::math::lgamma(hp.a0) + log_prior_ratio(hp.gamma) +
              boost::math::lgamma(shape_);
}

LogBF OneSampleScorer::operator()(Index i, Index j) const noexcept {
  const double norm_i = cache_->norm_sq(i);
  const double r2 = cache_->corr_sq(i, j);
  const double resid0 = 1.0 - r2;  // tau_{ij,0}^2 / tau_i^2

  double b0 = 0.0;
  if (hp_.b0_override) {
    b0 = *hp_.b0_override;
  } else if (resid0 >= kCollinearTolerance) {
    b0 = norm_i * resid0 / (2.0 * half_n_) * (hp_.a0 - 1.0);
  }
  if (!(b0 > 0.0)) return {kLogBfSentinel, i, j, true};

  const double ratio = (resid0 + hp_.gamma) / (1.0 + hp_.gamma);
  const double value = hp_.a0 * std::log(b0) + constant_ + 0.5 * norm_i -
                       shape_ * std::log(0.5 * norm_i * ratio + b0);
  return {value, i, j, false};
}

DiagScorer::DiagScorer(const GramCache& cache, double gamma) : cache_(&cache), gamma_(gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorKind::invalid_parameter, "gamma must be positive");
  half_n_ = 0.5 * static_cast<double>(cache.n());
  prior_term_ = log_prior_ratio(gamma);
  log1p_gamma_ = std::log1p(gamma);
}

LogBF DiagScorer::operator()(Index i, Index j) const noexcept {
  const double r2 = cache_->corr_sq(i, j);
  const double ratio = ((1.0 - r2) + gamma_) / (1.0 + gamma_);
  if (ratio < kCollinearTolerance) return {kLogBfSentinel, i, j, true};
  // log ratio = log1p(gamma - r2) - log1p(gamma): exact for small r2.
  const double log_ratio = std::log1p(gamma_ - r2) - log1p_gamma_;
  return {prior_term_ - half_n_ * log_ratio, i, j, false};
}

LogBF log_bf_one_sample(const GramCache& cache, Index i, Index j, const HyperParams& hp) {
  detail::check_pair(cache, i, j);
  return OneSampleScorer(cache, hp)(i, j);
}

LogBF log_bf_diag(const GramCache& cache, Index i, Index j, double gamma) {
  detail::check_pair(cache, i, j);
  return DiagScorer(cache, gamma)(i, j);
}

}  // namespace mxpbf
