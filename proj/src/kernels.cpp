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

#include "mxpbf/kernels.hpp"

namespace mxpbf::kernels {

namespace {
constexpr Index kLeafSize = 32;
}

double pairwise_dot(const double* a, const double* b, Index n) noexcept {
  if (n <= kLeafSize) {
    double acc = 0.0;
    for (Index k = 0; k < n; ++k) acc += a[k] * b[k];
    return acc;
  }
  // Split on a leaf boundary so the tree shape depends only on n.
  const Index half = ((n / kLeafSize + 1) / 2) * kLeafSize;
  return pairwise_dot(a, b, half) + pairwise_dot(a + half, b + half, n - half);
}

Eigen::MatrixXd gram_reference(const Eigen::MatrixXd& x) {
  const Index n = x.rows();
  const Index p = x.cols();
  Eigen::MatrixXd g(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = i; j < p; ++j) {
      const double v = pairwise_dot(x.col(i).data(), x.col(j).data(), n);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

Eigen::MatrixXd gram_parallel(const Eigen::MatrixXd& x) {
  const Index n = x.rows();
  const Index p = x.cols();
  Eigen::MatrixXd g(p, p);
  // Row i costs p - i dot products; dynamic chunks even out the triangle.
#pragma omp parallel for schedule(dynamic, 2)
  for (Index i = 0; i < p; ++i) {
    for (Index j = i; j < p; ++j) {
      const double v = pairwise_dot(x.col(i).data(), x.col(j).data(), n);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

}  // namespace mxpbf::kernels
