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

#include <cstdint>
#include <utility>
#include <vector>

#include "mxpbf/bayesfactor.hpp"

namespace mxpbf {

/// Selected pairs (i < j, zero-based, lexicographic order) and the threshold
/// that produced them.
struct SupportEstimate {
  std::vector<std::pair<Index, Index>> pairs;
  double threshold = 0.0;
  bool symmetrized = true;
};

/// Directed scores s(i, j) = 2 log B~_10(X_i | X_j); diagonal is -inf and
/// collinear pairs hold kDevianceCap.
class PairScores {
 public:
  PairScores(const GramCache& cache, double gamma);

  Index p() const noexcept { return scores_.cols(); }
  double directed(Index i, Index j) const noexcept { return scores_(i, j); }
  /// Score used for the unordered pair {i, j}.
  double pair_score(Index i, Index j, bool symmetrize) const noexcept;
  const Eigen::MatrixXd& matrix() const noexcept { return scores_; }

 private:
  Eigen::MatrixXd scores_;
};

SupportEstimate select_support(const PairScores& scores, double c_sel, bool symmetrize = true);
SupportEstimate select_support(const DataMatrix& data, const HyperParams& hp, double c_sel,
                               bool symmetrize = true);

/// Where the per-pair regression slope is fitted in the CV error.
enum class BetaFit { test, train };

struct Split {
  std::vector<Index> test_rows;   // I1
  std::vector<Index> train_rows;  // I2
};

/// ceil(n/3) test rows drawn uniformly without replacement from substream
/// `index` of `seed`. Both lists are sorted.
Split random_split(Index n, std::uint64_t seed, std::uint64_t index);

/// What a column with no selected partner adds to the CV error.
enum class EmptyRule {
  null_model,  // its held-out variance sum_{i in I1} X_ij^2 / (n1 - 1) (slope 0)
  zero,        // nothing
};

struct CvMseOptions {
  bool symmetrize = true;
  BetaFit fit = BetaFit::test;
  EmptyRule empty = EmptyRule::null_model;
};

/// Held-out error of the selected graph:
///   sum_j mean_{l in S_j} sum_{i in I1} (X_ij - X_il b_jl)^2 / (n1 - 1)
/// with S_j selected on the training rows only.
double cv_mse(const DataMatrix& data, const HyperParams& hp, double c_sel, const Split& split,
              const CvMseOptions& options = {});

/// -7, -6.8, ..., 10.
std::vector<double> default_cv_grid();

struct CvOptions {
  std::vector<double> grid = default_cv_grid();
  int nsplits = 50;
  std::uint64_t seed = 1;
  CvMseOptions mse;
};

struct CVReport {
  std::vector<double> grid;
  std::vector<double> mean_mse;
  double chosen = 0.0;
  int splits = 0;
  std::uint64_t seed = 0;
};

/// Grid search of the threshold minimising the split-averaged cv_mse. Splits
/// run in parallel; the result does not depend on the thread count.
CVReport cv_select_threshold(const DataMatrix& data, const HyperParams& hp,
                             const CvOptions& options);

struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
};

/// Tally over all p(p-1)/2 unordered pairs; positives are nonzero entries of truth.
Confusion confusion(const SupportEstimate& estimate, const CovarianceSpec& truth);

/// Matthews correlation; 0 when any marginal is empty.
double mcc(const Confusion& c);

std::uint64_t error_count(const Confusion& c);

}  // namespace mxpbf
