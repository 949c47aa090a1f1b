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

#include "mxpbf/support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/random/uniform_int_distribution.hpp>

#include "mxpbf/error.hpp"
#include "mxpbf/kernels.hpp"
#include "mxpbf/rng.hpp"

namespace mxpbf {

namespace {

struct CappedDiagScorer {
  DiagScorer inner;
  LogBF operator()(Index i, Index j) const noexcept {
    LogBF s = inner(i, j);
    // Doubling here keeps the matrix on the 2 log BF scale.
    s.value = s.collinear_overflow ? kDevianceCap : 2.0 * s.value;
    return s;
  }
};

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& x, const std::vector<Index>& rows) {
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = x.row(rows[r]);
  return out;
}

/// Everything about one split that does not depend on the threshold.
class SplitEvaluator {
 public:
  SplitEvaluator(const DataMatrix& data, const HyperParams& hp, const Split& split,
                 const CvMseOptions& options)
      : p_(data.p()) {
    const Index n1 = static_cast<Index>(split.test_rows.size());
    if (n1 < 2) throw Error(ErrorKind::invalid_parameter, "test set needs at least two rows");
    if (split.train_rows.size() < 3) {
      throw Error(ErrorKind::invalid_parameter, "training set needs at least three rows");
    }
    const Eigen::MatrixXd test = gather_rows(data.values(), split.test_rows);
    const Eigen::MatrixXd train = gather_rows(data.values(), split.train_rows);

    const PairScores scores(build_gram(train), hp.gamma);
    score_.resize(p_, p_);
    for (Index j = 0; j < p_; ++j) {
      for (Index l = 0; l < p_; ++l) {
        score_(j, l) = (j == l) ? -std::numeric_limits<double>::infinity()
                                : scores.pair_score(j, l, options.symmetrize);
      }
    }

    const Eigen::MatrixXd& fit_rows = (options.fit == BetaFit::test) ? test : train;
    const Eigen::MatrixXd fit_gram = kernels::gram_reference(fit_rows);
    const Eigen::MatrixXd test_gram = kernels::gram_reference(test);
    const double denom = static_cast<double>(n1 - 1);
    empty_.resize(p_);
    for (Index j = 0; j < p_; ++j) {
      empty_(j) = (options.empty == EmptyRule::zero) ? 0.0 : test_gram(j, j) / denom;
    }
    residual_.resize(p_, p_);
    for (Index j = 0; j < p_; ++j) {
      for (Index l = 0; l < p_; ++l) {
        if (j == l) {
          residual_(j, l) = 0.0;
          continue;
        }
        const double sxx = fit_gram(l, l);
        if (!(sxx > 0.0)) {
          residual_(j, l) = std::numeric_limits<double>::quiet_NaN();
          continue;
        }
        const double beta = fit_gram(l, j) / sxx;
        // sum_i (x_ij - b x_il)^2 expanded over the test Gram.
        const double rss = test_gram(j, j) - 2.0 * beta * test_gram(j, l) + beta * beta * test_gram(l, l);
        residual_(j, l) = std::max(0.0, rss) / denom;
      }
    }
  }

  double mse(double c_sel) const {
    double total = 0.0;
    for (Index j = 0; j < p_; ++j) {
      double sum = 0.0;
      Index count = 0;
      for (Index l = 0; l < p_; ++l) {
        if (l == j || !(score_(j, l) > c_sel)) continue;
        const double r = residual_(j, l);
        if (std::isnan(r)) {
          throw Error(ErrorKind::degenerate_split,
                      "column " + std::to_string(l + 1) + " is zero on the fitting rows");
        }
        sum += r;
        ++count;
      }
      total += (count > 0) ? sum / static_cast<double>(count) : empty_(j);
    }
    return total;
  }

 private:
  Index p_;
  Eigen::MatrixXd score_;
  Eigen::MatrixXd residual_;
  Eigen::VectorXd empty_;
};

}  // namespace

PairScores::PairScores(const GramCache& cache, double gamma)
    : scores_(kernels::score_matrix_parallel(cache.p(), CappedDiagScorer{DiagScorer(cache, gamma)})) {}

double PairScores::pair_score(Index i, Index j, bool symmetrize) const noexcept {
  const Index lo = std::min(i, j);
  const Index hi = std::max(i, j);
  const double forward = scores_(lo, hi);
  return symmetrize ? std::max(forward, scores_(hi, lo)) : forward;
}

SupportEstimate select_support(const PairScores& scores, double c_sel, bool symmetrize) {
  SupportEstimate est;
  est.threshold = c_sel;
  est.symmetrized = symmetrize;
  for (Index i = 0; i < scores.p(); ++i) {
    for (Index j = i + 1; j < scores.p(); ++j) {
      if (scores.pair_score(i, j, symmetrize) > c_sel) est.pairs.emplace_back(i, j);
    }
  }
  return est;
}

SupportEstimate select_support(const DataMatrix& data, const HyperParams& hp, double c_sel,
                               bool symmetrize) {
  if (data.p() < 2) throw Error(ErrorKind::invalid_parameter, "support needs at least two variables");
  return select_support(PairScores(build_gram(data), hp.gamma), c_sel, symmetrize);
}

Split random_split(Index n, std::uint64_t seed, std::uint64_t index) {
  if (n < 6) throw Error(ErrorKind::invalid_parameter, "cross-validation needs n >= 6");
  const Index n1 = (n + 2) / 3;
  std::vector<Index> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), Index{0});
  Engine engine = make_stream(seed, StreamDomain::cv_split, index);
  // Partial Fisher-Yates: the first n1 slots become the test rows.
  for (Index k = 0; k < n1; ++k) {
    boost::random::uniform_int_distribution<Index> pick(k, n - 1);
    std::swap(rows[static_cast<std::size_t>(k)], rows[static_cast<std::size_t>(pick(engine))]);
  }
  Split split;
  split.test_rows.assign(rows.begin(), rows.begin() + n1);
  split.train_rows.assign(rows.begin() + n1, rows.end());
  std::sort(split.test_rows.begin(), split.test_rows.end());
  std::sort(split.train_rows.begin(), split.train_rows.end());
  return split;
}

double cv_mse(const DataMatrix& data, const HyperParams& hp, double c_sel, const Split& split,
              const CvMseOptions& options) {
  return SplitEvaluator(data, hp, split, options).mse(c_sel);
}

std::vector<double> default_cv_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 85; ++k) grid.push_back(-7.0 + 0.2 * k);
  return grid;
}

CVReport cv_select_threshold(const DataMatrix& data, const HyperParams& hp,
                             const CvOptions& options) {
  if (options.grid.empty()) throw Error(ErrorKind::domain, "threshold grid is empty");
  if (options.nsplits < 1) throw Error(ErrorKind::invalid_parameter, "nsplits must be positive");
  if (data.n() < 6) throw Error(ErrorKind::invalid_parameter, "cross-validation needs n >= 6");

  const auto nsplits = static_cast<std::size_t>(options.nsplits);
  const std::size_t ngrid = options.grid.size();
  std::vector<std::vector<double>> per_split(nsplits);
  std::vector<std::exception_ptr> failures(nsplits);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t s = 0; s < nsplits; ++s) {
    try {
      const Split split = random_split(data.n(), options.seed, s);
      const SplitEvaluator eval(data, hp, split, options.mse);
      per_split[s].resize(ngrid);
      for (std::size_t g = 0; g < ngrid; ++g) per_split[s][g] = eval.mse(options.grid[g]);
    } catch (...) {
      failures[s] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  CVReport report;
  report.grid = options.grid;
  report.splits = options.nsplits;
  report.seed = options.seed;
  report.mean_mse.assign(ngrid, 0.0);
  for (std::size_t g = 0; g < ngrid; ++g) {
    double sum = 0.0;
    for (std::size_t s = 0; s < nsplits; ++s) sum += per_split[s][g];
    report.mean_mse[g] = sum / static_cast<double>(nsplits);
  }
  // First minimiser in grid order.
  const auto best = std::min_element(report.mean_mse.begin(), report.mean_mse.end());
  report.chosen = report.grid[static_cast<std::size_t>(best - report.mean_mse.begin())];
  return report;
}

Confusion confusion(const SupportEstimate& estimate, const CovarianceSpec& truth) {
  const Index p = truth.p();
  std::vector<char> selected(static_cast<std::size_t>(p * p), 0);
  for (const auto& [i, j] : estimate.pairs) {
    if (i < 0 || j < 0 || i >= p || j >= p || i == j) {
      throw Error(ErrorKind::invalid_pair, "estimate does not match the truth dimension");
    }
    selected[static_cast<std::size_t>(std::min(i, j) * p + std::max(i, j))] = 1;
  }
  Confusion c;
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      const bool positive = truth(i, j) != 0.0;
      const bool hit = selected[static_cast<std::size_t>(i * p + j)] != 0;
      if (positive && hit) ++c.tp;
      else if (positive) ++c.fn;
      else if (hit) ++c.fp;
      else ++c.tn;
    }
  }
  return c;
}

double mcc(const Confusion& c) {
  const auto d = [](std::uint64_t v) { return static_cast<double>(v); };
  const double denom = (d(c.tp) + d(c.fp)) * (d(c.tp) + d(c.fn)) * (d(c.tn) + d(c.fp)) *
                       (d(c.tn) + d(c.fn));
  if (denom == 0.0) return 0.0;
  return (d(c.tp) * d(c.tn) - d(c.fp) * d(c.fn)) / std::sqrt(denom);
}

std::uint64_t error_count(const Confusion& c) { return c.fp + c.fn; }

}  // namespace mxpbf
