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

#include "mxpbf/dataio.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>

#include "mxpbf/error.hpp"

namespace mxpbf {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

char delimiter(TableFormat format) { return format == TableFormat::tsv ? '\t' : ','; }

std::string shortest(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

RawTable read_table(std::istream& in, TableFormat format, const std::string& source) {
  RawTable table;
  const char delim = delimiter(format);
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto tokens = split(view, delim);
    if (first) {
      first = false;
      if (!parse_number(tokens.front())) {
        for (const auto tok : tokens) table.header.emplace_back(trim(tok));
        width = tokens.size();
        continue;
      }
    }
    if (width == 0) width = tokens.size();
    if (tokens.size() != width) {
      std::ostringstream msg;
      msg << source << ": row at line " << line_no << " has " << tokens.size()
          << " fields, expected " << width;
      throw Error(ErrorKind::malformed_input, msg.str());
    }
    std::vector<double> row;
    row.reserve(width);
    for (std::size_t c = 0; c < tokens.size(); ++c) {
      const auto value = parse_number(tokens[c]);
      if (!value) {
        std::ostringstream msg;
        msg << source << ": cannot parse '" << trim(tokens[c]) << "' at line " << line_no
            << ", column " << (c + 1);
        throw Error(ErrorKind::malformed_input, msg.str());
      }
      row.push_back(*value);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) {
    throw Error(ErrorKind::malformed_input, source + ": no numeric rows");
  }
  return table;
}

Eigen::MatrixXd to_matrix(const RawTable& table) {
  const auto n = static_cast<Index>(table.rows.size());
  const auto p = static_cast<Index>(table.rows.front().size());
  Eigen::MatrixXd m(n, p);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < p; ++c) m(r, c) = table.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  return m;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

DataMatrix::DataMatrix(Eigen::MatrixXd values, bool centered,
                       std::vector<std::string> column_names)
    : values_(std::move(values)), centered_(centered), names_(std::move(column_names)) {
  if (!names_.empty() && static_cast<Index>(names_.size()) != values_.cols()) {
    throw Error(ErrorKind::malformed_input, "column name count does not match column count");
  }
}

CovarianceSpec::CovarianceSpec(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw Error(ErrorKind::invalid_covariance, "covariance matrix must be square and nonempty");
  }
  for (Index i = 0; i < entries_.rows(); ++i) {
    for (Index j = i + 1; j < entries_.cols(); ++j) {
      if (entries_(i, j) != entries_(j, i)) {
        throw Error(ErrorKind::invalid_covariance, "covariance matrix is not symmetric");
      }
    }
  }
}

double CovarianceSpec::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

TableFormat format_for_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (ext == ".tsv" || ext == ".tab" || ext == ".txt") return TableFormat::tsv;
  return TableFormat::csv;
}

DataMatrix parse_matrix(std::istream& in, TableFormat format, const std::string& source) {
  const RawTable table = read_table(in, format, source);
  Eigen::MatrixXd values = to_matrix(table);
  for (Index c = 0; c < values.cols(); ++c) {
    const double first = values(0, c);
    if ((values.col(c).array() == first).all()) {
      std::ostringstream msg;
      msg << source << ": column " << (c + 1) << " has zero variance";
      throw Error(ErrorKind::degenerate_data, msg.str());
    }
  }
  return DataMatrix(std::move(values), false, table.header);
}

DataMatrix load_matrix(const std::filesystem::path& path, TableFormat format) {
  auto in = open_input(path);
  return parse_matrix(in, format, path.string());
}

DataMatrix load_matrix(const std::filesystem::path& path) {
  return load_matrix(path, format_for_path(path));
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& values, TableFormat format,
                  const std::vector<std::string>& header) {
  const char delim = delimiter(format);
  if (!header.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c) out << delim;
      out << header[c];
    }
    out << '\n';
  }
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      if (c) out << delim;
      out << shortest(values(r, c));
    }
    out << '\n';
  }
}

void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                 const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
  write_matrix(out, values, format_for_path(path), header);
}

CovarianceSpec load_covariance(const std::filesystem::path& path) {
  auto in = open_input(path);
  const RawTable table = read_table(in, format_for_path(path), path.string());
  return CovarianceSpec(to_matrix(table));
}

DataMatrix center_columns(const DataMatrix& data) {
  Eigen::MatrixXd values = data.values();
  for (Index c = 0; c < values.cols(); ++c) {
    const double mean = values.col(c).mean();
    values.col(c).array() -= mean;
  }
  return DataMatrix(std::move(values), true, data.column_names());
}

Eigen::MatrixXd inverse_sqrt(const CovarianceSpec& sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma.entries());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::invalid_covariance, "eigendecomposition failed");
  }
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  if (lambda.minCoeff() <= 0.0) {
    throw Error(ErrorKind::invalid_covariance, "sigma0 is not positive definite");
  }
  const Eigen::MatrixXd& v = solver.eigenvectors();
  return v * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
}

DataMatrix transform_null(const DataMatrix& data, const CovarianceSpec& sigma0) {
  if (sigma0.p() != data.p()) {
    throw Error(ErrorKind::invalid_covariance, "sigma0 dimension does not match data");
  }
  const Eigen::MatrixXd root = inverse_sqrt(sigma0);
  // Rows are observations: (S^{-1/2} x_i)^T = x_i^T S^{-1/2} (S^{-1/2} symmetric).
  Eigen::MatrixXd out = data.values() * root;
  return DataMatrix(std::move(out), data.centered(), data.column_names());
}

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::malformed_input: return "malformed-input";
    case ErrorKind::degenerate_data: return "degenerate-data";
    case ErrorKind::invalid_covariance: return "invalid-covariance";
    case ErrorKind::invalid_pair: return "invalid-pair";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::domain: return "domain-error";
    case ErrorKind::collinearity: return "collinearity";
    case ErrorKind::degenerate_split: return "degenerate-split";
    case ErrorKind::io: return "io-error";
  }
  return "error";
}

}  // namespace mxpbf
