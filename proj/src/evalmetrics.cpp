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

#include "mxpbf/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "mxpbf/error.hpp"
#include "mxpbf/hyptest.hpp"
#include "mxpbf/simulate.hpp"

namespace mxpbf {

RocCurve roc_curve(std::span<const double> null_stats, std::span<const double> alt_stats) {
  if (null_stats.empty() || alt_stats.empty()) {
    throw Error(ErrorKind::domain, "ROC needs nonempty null and alternative statistics");
  }
  std::vector<double> null_sorted(null_stats.begin(), null_stats.end());
  std::vector<double> alt_sorted(alt_stats.begin(), alt_stats.end());
  std::sort(null_sorted.begin(), null_sorted.end(), std::greater<>());
  std::sort(alt_sorted.begin(), alt_sorted.end(), std::greater<>());

  std::vector<double> cutoffs;
  cutoffs.reserve(null_sorted.size() + alt_sorted.size());
  std::merge(null_sorted.begin(), null_sorted.end(), alt_sorted.begin(), alt_sorted.end(),
             std::back_inserter(cutoffs), std::greater<>());
  cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());

  const double m0 = static_cast<double>(null_sorted.size());
  const double m1 = static_cast<double>(alt_sorted.size());
  RocCurve roc;
  roc.points.emplace_back(0.0, 0.0);
  roc.thresholds.push_back(std::numeric_limits<double>::infinity());

  std::size_t a = 0;
  std::size_t b = 0;
  double area2 = 0.0;  // twice the trapezoid area in count units
  std::size_t prev_a = 0;
  std::size_t prev_b = 0;
  for (const double t : cutoffs) {
    while (a < null_sorted.size() && null_sorted[a] >= t) ++a;
    while (b < alt_sorted.size() && alt_sorted[b] >= t) ++b;
    area2 += static_cast<double>(a - prev_a) * static_cast<double>(b + prev_b);
    prev_a = a;
    prev_b = b;
    roc.points.emplace_back(static_cast<double>(a) / m0, static_cast<double>(b) / m1);
    roc.thresholds.push_back(t);
  }
  roc.auc = area2 / (2.0 * m0 * m1);
  return roc;
}

std::vector<double> simulate_statistics(const CovarianceSpec& spec, Index n, StatisticKind kind,
                                        const HyperParams& hp, int reps, std::uint64_t seed) {
  if (reps < 1) throw Error(ErrorKind::invalid_parameter, "reps must be positive");
  const MvnSampler sampler(spec);
  std::vector<double> stats(static_cast<std::size_t>(reps));
  std::vector<std::exception_ptr> failures(stats.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < reps; ++r) {
    try {
      const DataMatrix x = sampler.draw(n, seed, static_cast<std::uint64_t>(r));
      const GramCache cache = build_gram(x);
      const TestOutcome out = (kind == StatisticKind::one_sample)
                                  ? one_sample_test(cache, hp)
                                  : diagonality_test(cache, hp, ThresholdRule{});
      stats[static_cast<std::size_t>(r)] = out.statistic;
    } catch (...) {
      failures[static_cast<std::size_t>(r)] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return stats;
}

std::vector<double> mc_null_statistics(Index n, Index p, const HyperParams& hp, int reps,
                                       std::uint64_t seed) {
  return simulate_statistics(cov_identity(p), n, StatisticKind::diagonality, hp, reps, seed);
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(ErrorKind::domain, "KS distance needs samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double f = cdf(sorted[k]);
    // Ties: the empirical CDF jumps only after the last equal sample.
    const double below = static_cast<double>(k) / m;
    std::size_t last = k;
    while (last + 1 < sorted.size() && sorted[last + 1] == sorted[k]) ++last;
    const double above = static_cast<double>(last + 1) / m;
    d = std::max({d, above - f, f - below});
    k = last;
  }
  return d;
}

}  // namespace mxpbf
