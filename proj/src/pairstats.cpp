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

#include "mxpbf/pairstats.hpp"

#include <string>

#include "mxpbf/error.hpp"
#include "mxpbf/kernels.hpp"

namespace mxpbf {

GramCache::GramCache(Eigen::MatrixXd gram, Index n)
    : gram_(std::move(gram)), norms_sq_(gram_.diagonal()), n_(n) {
  for (Index j = 0; j < norms_sq_.size(); ++j) {
    if (!(norms_sq_(j) > 0.0)) {
      throw Error(ErrorKind::degenerate_data,
                  "column " + std::to_string(j + 1) + " has zero norm");
    }
  }
}

GramCache build_gram(const Eigen::MatrixXd& values) {
  return GramCache(kernels::gram_parallel(values), values.rows());
}

GramCache build_gram(const DataMatrix& data) { return build_gram(data.values()); }

namespace detail {

void check_pair(const GramCache& cache, Index i, Index j) {
  if (i < 0 || j < 0 || i >= cache.p() || j >= cache.p()) {
    throw Error(ErrorKind::invalid_pair, "column index out of range");
  }
  if (i == j) throw Error(ErrorKind::invalid_pair, "pair requires i != j");
}

}  // namespace detail

double tau_i_sq(const GramCache& cache, Index i) {
  if (i < 0 || i >= cache.p()) throw Error(ErrorKind::invalid_pair, "column index out of range");
  return cache.norm_sq(i) / static_cast<double>(cache.n());
}

double tau_ij_gamma_sq(const GramCache& cache, Index i, Index j, double gamma) {
  detail::check_pair(cache, i, j);
  if (gamma < 0.0) throw Error(ErrorKind::domain, "gamma must be nonnegative");
  return cache.norm_sq(i) * residual_ratio(cache, i, j, gamma).value /
         static_cast<double>(cache.n());
}

double sample_correlation_sq(const GramCache& cache, Index i, Index j) {
  detail::check_pair(cache, i, j);
  return cache.corr_sq(i, j);
}

ResidualRatio residual_ratio(const GramCache& cache, Index i, Index j, double gamma) {
  const double r2 = cache.corr_sq(i, j);
  const double ratio = ((1.0 - r2) + gamma) / (1.0 + gamma);
  return {ratio, ratio < kCollinearTolerance};
}

}  // namespace mxpbf
