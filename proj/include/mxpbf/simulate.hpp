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
#include <optional>
#include <string>

#include "mxpbf/dataio.hpp"

namespace mxpbf {

enum class CovKind { identity, compound_symmetry, two_entry, banded_setting1, banded_setting2 };

const char* to_string(CovKind kind) noexcept;
std::optional<CovKind> parse_cov_kind(const std::string& name);

struct CovModel {
  CovKind kind = CovKind::identity;
  Index p = 0;
  double rho = 0.0;
  bool repaired = false;
  double min_eig_before = 0.0;
  double min_eig_after = 0.0;
  CovarianceSpec spec;
};

CovarianceSpec cov_identity(Index p);
/// Unit diagonal, constant off-diagonal rho; needs -1/(p-1) < rho < 1.
CovarianceSpec cov_compound_symmetry(Index p, double rho);
/// Identity except entries (1,2) and (2,1) equal rho; needs |rho| < 1.
CovarianceSpec cov_two_entry(Index p, double rho);

/// Banded block in the first half: 2 max(1 - |i-j|/10, 0) for |i-j| <= 5 and
/// max(i, j) <= p/2 (one-based, floor), then repaired to be positive definite.
CovModel cov_banded_setting1(Index p);
/// Same band for i <= p/2; for i > p/2 a wider band 2 max(1 - |i-j|/20, 0),
/// |i-j| <= 10 (i < j). Repaired.
CovModel cov_banded_setting2(Index p);

/// Dispatches on kind (rho ignored by the banded and identity models).
CovModel make_cov_model(CovKind kind, Index p, double rho = 0.0);

struct PdRepair {
  CovarianceSpec spec;
  bool repaired = false;
  double min_eig_before = 0.0;
  double min_eig_after = 0.0;
};

/// If lambda_min(raw) <= 0, add (eps - lambda_min(raw)) to the diagonal.
PdRepair ensure_pd_report(const Eigen::MatrixXd& raw, double eps = 0.01);
CovarianceSpec ensure_pd(const Eigen::MatrixXd& raw, double eps = 0.01);

/// n rows of N_p(0, spec) as L z with L the lower Cholesky factor and z drawn
/// from substream `stream` of `seed` (row by row). Throws invalid_covariance
/// if the factorisation fails.
DataMatrix sample_mvn(const CovarianceSpec& spec, Index n, std::uint64_t seed,
                      std::uint64_t stream = 0);

/// Cholesky factor reused across replicates.
class MvnSampler {
 public:
  explicit MvnSampler(const CovarianceSpec& spec);
  DataMatrix draw(Index n, std::uint64_t seed, std::uint64_t stream) const;
  Index p() const noexcept { return lower_.rows(); }

 private:
  Eigen::MatrixXd lower_;
};

}  // namespace mxpbf
