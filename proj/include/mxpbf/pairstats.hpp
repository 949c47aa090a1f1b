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

#include <algorithm>

#include <Eigen/Dense>

#include "mxpbf/dataio.hpp"

namespace mxpbf {

/// Residual ratios below this (relative to ||X_i||^2) are treated as an exact fit.
inline constexpr double kCollinearTolerance = 1e-14;

/// Gram matrix X^T X and squared column norms. Every pairwise regression
/// statistic is O(1) from here because the hat matrix of a single column is
/// rank one: X_i^T H_j X_i = (X_j^T X_i)^2 / ||X_j||^2.
class GramCache {
 public:
  GramCache(Eigen::MatrixXd gram, Index n);

  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  const Eigen::VectorXd& norms_sq() const noexcept { return norms_sq_; }
  Index n() const noexcept { return n_; }
  Index p() const noexcept { return gram_.cols(); }

  double inner(Index i, Index j) const noexcept { return gram_(i, j); }
  double norm_sq(Index j) const noexcept { return norms_sq_(j); }

  /// Squared sample correlation (uncentered), clamped to [0, 1]. Unchecked.
  double corr_sq(Index i, Index j) const noexcept {
    const double g = gram_(i, j);
    return std::min(1.0, (g * g) / (norms_sq_(i) * norms_sq_(j)));
  }

 private:
  Eigen::MatrixXd gram_;
  Eigen::VectorXd norms_sq_;
  Index n_;
};

/// O(n p^2) once; parallel over columns. Throws degenerate_data on a zero column.
GramCache build_gram(const DataMatrix& data);
GramCache build_gram(const Eigen::MatrixXd& values);

/// ||X_i||^2 / n.
double tau_i_sq(const GramCache& cache, Index i);

/// (||X_i||^2 - (1+gamma)^{-1} (X_i^T X_j)^2 / ||X_j||^2) / n, gamma >= 0.
double tau_ij_gamma_sq(const GramCache& cache, Index i, Index j, double gamma);

/// (X_i^T X_j)^2 / (||X_i||^2 ||X_j||^2).
double sample_correlation_sq(const GramCache& cache, Index i, Index j);

/// tau_ij_gamma_sq / tau_i_sq = (1 - r^2 + gamma) / (1 + gamma), with a flag
/// when it falls below kCollinearTolerance.
struct ResidualRatio {
  double value;
  bool near_collinear;
};
ResidualRatio residual_ratio(const GramCache& cache, Index i, Index j, double gamma);

namespace detail {
void check_pair(const GramCache& cache, Index i, Index j);
}

}  // namespace mxpbf
