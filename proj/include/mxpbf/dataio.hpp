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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mxpbf {

using Index = Eigen::Index;

/// n x p observation matrix: rows are observations, columns are variables.
/// Immutable once built.
class DataMatrix {
 public:
  DataMatrix() = default;
  explicit DataMatrix(Eigen::MatrixXd values, bool centered = false,
                      std::vector<std::string> column_names = {});

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  Index n() const noexcept { return values_.rows(); }
  Index p() const noexcept { return values_.cols(); }
  bool centered() const noexcept { return centered_; }
  const std::vector<std::string>& column_names() const noexcept { return names_; }

 private:
  Eigen::MatrixXd values_;
  bool centered_ = false;
  std::vector<std::string> names_;
};

/// Symmetric positive definite p x p matrix.
class CovarianceSpec {
 public:
  CovarianceSpec() = default;
  /// Throws invalid_covariance unless `entries` is square and exactly symmetric.
  explicit CovarianceSpec(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  Index p() const noexcept { return entries_.rows(); }
  double operator()(Index i, Index j) const { return entries_(i, j); }

  /// Smallest eigenvalue (symmetric eigensolver).
  double min_eigenvalue() const;

 private:
  Eigen::MatrixXd entries_;
};

enum class TableFormat { csv, tsv };

/// csv unless the extension is .tsv / .tab / .txt.
TableFormat format_for_path(const std::filesystem::path& path);

/// Parses a rectangular numeric table. The first line is taken as a header
/// when its first token is not a number. Constant columns are rejected.
DataMatrix parse_matrix(std::istream& in, TableFormat format,
                        const std::string& source = "<stream>");
DataMatrix load_matrix(const std::filesystem::path& path, TableFormat format);
DataMatrix load_matrix(const std::filesystem::path& path);

/// Values are written in shortest round-trip form, so parse(write(x)) == x.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& values,
                  TableFormat format,
                  const std::vector<std::string>& header = {});
void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                 const std::vector<std::string>& header = {});

/// Reads a p x p matrix (no zero-variance check; identity-like rows are fine).
CovarianceSpec load_covariance(const std::filesystem::path& path);

DataMatrix center_columns(const DataMatrix& data);

/// Replaces every row x by S^{-1/2} x, S^{1/2} the symmetric square root of
/// sigma0. Testing Sigma = sigma0 on the input equals testing Sigma = I on
/// the output.
DataMatrix transform_null(const DataMatrix& data, const CovarianceSpec& sigma0);

/// Inverse symmetric square root via eigendecomposition.
Eigen::MatrixXd inverse_sqrt(const CovarianceSpec& sigma);

}  // namespace mxpbf
