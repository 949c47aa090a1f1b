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

// Data-parallel kernels behind the pairwise sweep.
//
// Every kernel has a serial *_reference twin with the same arithmetic. The
// parallel versions split work so that each output element is produced by
// exactly one thread with the same operation order as the reference, hence
// results are bit-identical for any thread count. The reductions (max over
// pairs) use a strict total order, so their combination order is irrelevant.

#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace mxpbf::kernels {

using Index = Eigen::Index;

/// Dot product with pairwise (cascade) summation over blocks of 32.
double pairwise_dot(const double* a, const double* b, Index n) noexcept;

/// Upper and lower triangles of X^T X, one pairwise_dot per entry.
Eigen::MatrixXd gram_reference(const Eigen::MatrixXd& x);
Eigen::MatrixXd gram_parallel(const Eigen::MatrixXd& x);

/// Best pair seen by a max-reduction. Ties go to the lexicographically
/// smallest (i, j).
struct PairMax {
  double value = -std::numeric_limits<double>::infinity();
  Index i = -1;
  Index j = -1;
  Index flagged = 0;  // number of scored pairs carrying the collinear flag
  Index scored = 0;

  bool beats(const PairMax& other) const noexcept {
    if (value != other.value) return value > other.value;
    if (i != other.i) return i < other.i;
    return j < other.j;
  }
  void absorb(const PairMax& other) noexcept {
    if (other.i >= 0 && (i < 0 || other.beats(*this))) {
      value = other.value;
      i = other.i;
      j = other.j;
    }
    flagged += other.flagged;
    scored += other.scored;
  }
};

enum class PairSet { ordered, unordered };

// Score must be callable as score(i, j) and return something with `.value`
// (double) and `.collinear_overflow` (bool).

template <class Score>
PairMax max_over_pairs_reference(Index p, PairSet set, const Score& score) {
  PairMax best;
  for (Index i = 0; i < p; ++i) {
    for (Index j = (set == PairSet::ordered ? 0 : i + 1); j < p; ++j) {
      if (i == j) continue;
      const auto s = score(i, j);
      PairMax candidate;
      candidate.value = s.value;
      candidate.i = i;
      candidate.j = j;
      candidate.flagged = s.collinear_overflow ? 1 : 0;
      candidate.scored = 1;
      best.absorb(candidate);
    }
  }
  return best;
}

template <class Score>
PairMax max_over_pairs_parallel(Index p, PairSet set, const Score& score) {
  PairMax best;
#pragma omp parallel
  {
    PairMax local;
#pragma omp for schedule(dynamic, 4) nowait
    for (Index i = 0; i < p; ++i) {
      for (Index j = (set == PairSet::ordered ? 0 : i + 1); j < p; ++j) {
        if (i == j) continue;
        const auto s = score(i, j);
        PairMax candidate;
        candidate.value = s.value;
        candidate.i = i;
        candidate.j = j;
        candidate.flagged = s.collinear_overflow ? 1 : 0;
        candidate.scored = 1;
        local.absorb(candidate);
      }
    }
#pragma omp critical(mxpbf_pair_max)
    best.absorb(local);
  }
  return best;
}

/// Full directed score matrix: out(i, j) = score(i, j).value for i != j,
/// diagonal set to -inf.
template <class Score>
Eigen::MatrixXd score_matrix_reference(Index p, const Score& score) {
  Eigen::MatrixXd out(p, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) {
      out(i, j) = (i == j) ? -std::numeric_limits<double>::infinity() : score(i, j).value;
    }
  }
  return out;
}

template <class Score>
Eigen::MatrixXd score_matrix_parallel(Index p, const Score& score) {
  Eigen::MatrixXd out(p, p);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) {
      out(i, j) = (i == j) ? -std::numeric_limits<double>::infinity() : score(i, j).value;
    }
  }
  return out;
}

}  // namespace mxpbf::kernels
