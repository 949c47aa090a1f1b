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
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mxpbf/bayesfactor.hpp"

namespace mxpbf {

struct RocCurve {
  /// (false positive rate, true positive rate), from (0,0) to (1,1).
  std::vector<std::pair<double, double>> points;
  /// Cutoff behind each point ("statistic >= threshold" is called positive);
  /// the first point uses +inf.
  std::vector<double> thresholds;
  double auc = 0.0;
};

/// Exact step ROC over the pooled distinct statistic values; trapezoidal AUC,
/// which counts null/alternative ties as one half.
RocCurve roc_curve(std::span<const double> null_stats, std::span<const double> alt_stats);

enum class StatisticKind { one_sample, diagonality };

/// One test statistic per replicate dataset drawn from N_p(0, spec); replicate
/// r uses substream r of `seed`. Replicates run in parallel.
std::vector<double> simulate_statistics(const CovarianceSpec& spec, Index n, StatisticKind kind,
                                        const HyperParams& hp, int reps, std::uint64_t seed);

/// Diagonality statistics under N_p(0, I_p).
std::vector<double> mc_null_statistics(Index n, Index p, const HyperParams& hp, int reps,
                                       std::uint64_t seed);

/// Kolmogorov distance sup_x |F_m(x) - cdf(x)|.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

}  // namespace mxpbf
