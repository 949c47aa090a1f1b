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

#include "mxpbf/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <boost/random/normal_distribution.hpp>

#include "mxpbf/error.hpp"
#include "mxpbf/rng.hpp"

namespace mxpbf {

namespace {

void require_dimension(Index p, Index min_p) {
  if (p < min_p) {
    throw Error(ErrorKind::invalid_parameter,
                "dimension must be at least " + std::to_string(min_p));
  }
}

double band(Index gap, double width) { return 2.0 * std::max(1.0 - static_cast<double>(gap) / width, 0.0); }

CovModel finish_model(CovKind kind, Index p, const Eigen::MatrixXd& raw) {
  PdRepair fixed = ensure_pd_report(raw);
  CovModel model;
  model.kind = kind;
  model.p = p;
  model.repaired = fixed.repaired;
  model.min_eig_before = fixed.min_eig_before;
  model.min_eig_after = fixed.min_eig_after;
  model.spec = std::move(fixed.spec);
  return model;
}

}  // namespace

const char* to_string(CovKind kind) noexcept {
  switch (kind) {
    case CovKind::identity: return "identity";
    case CovKind::compound_symmetry: return "compound-symmetry";
    case CovKind::two_entry: return "two-entry";
    case CovKind::banded_setting1: return "banded1";
    case CovKind::banded_setting2: return "banded2";
  }
  return "unknown";
}

std::optional<CovKind> parse_cov_kind(const std::string& name) {
  for (CovKind k : {CovKind::identity, CovKind::compound_symmetry, CovKind::two_entry,
                    CovKind::banded_setting1, CovKind::banded_setting2}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

CovarianceSpec cov_identity(Index p) {
  require_dimension(p, 1);
  return CovarianceSpec(Eigen::MatrixXd::Identity(p, p));
}

CovarianceSpec cov_compound_symmetry(Index p, double rho) {
  require_dimension(p, 2);
  const double lower = -1.0 / static_cast<double>(p - 1);
  if (!(rho > lower && rho < 1.0)) {
    throw Error(ErrorKind::invalid_parameter,
                "compound symmetry needs -1/(p-1) < rho < 1 for positive definiteness");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(p, p, rho);
  m.diagonal().setOnes();
  return CovarianceSpec(std::move(m));
}

CovarianceSpec cov_two_entry(Index p, double rho) {
  require_dimension(p, 2);
  if (!(std::abs(rho) < 1.0)) throw Error(ErrorKind::invalid_parameter, "two-entry model needs |rho| < 1");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p);
  m(0, 1) = rho;
  m(1, 0) = rho;
  return CovarianceSpec(std::move(m));
}

CovModel cov_banded_setting1(Index p) {
  require_dimension(p, 2);
  const Index half = p / 2;
  Eigen::MatrixXd raw = Eigen::MatrixXd::Identity(p, p);
  // One-based indices a < b.
  for (Index a = 1; a <= p; ++a) {
    for (Index b = a + 1; b <= p; ++b) {
      const Index gap = b - a;
      if (gap <= 5 && b <= half) {
        raw(a - 1, b - 1) = raw(b - 1, a - 1) = band(gap, 10.0);
      }
    }
  }
  return finish_model(CovKind::banded_setting1, p, raw);
}

CovModel cov_banded_setting2(Index p) {
  require_dimension(p, 4);
  const Index half = p / 2;
  Eigen::MatrixXd raw = Eigen::MatrixXd::Identity(p, p);
  for (Index a = 1; a <= p; ++a) {
    for (Index b = a + 1; b <= p; ++b) {
      const Index gap = b - a;
      double v = 0.0;
      if (gap <= 5 && a <= half) v += band(gap, 10.0);
      if (gap <= 10 && a > half) v += band(gap, 20.0);
      raw(a - 1, b - 1) = raw(b - 1, a - 1) = v;
    }
  }
  return finish_model(CovKind::banded_setting2, p, raw);
}

CovModel make_cov_model(CovKind kind, Index p, double rho) {
  switch (kind) {
    case CovKind::banded_setting1: return cov_banded_setting1(p);
    case CovKind::banded_setting2: return cov_banded_setting2(p);
    default: break;
  }
  CovModel model;
  model.kind = kind;
  model.p = p;
  model.rho = rho;
  if (kind == CovKind::identity) {
    model.spec = cov_identity(p);
  } else if (kind == CovKind::compound_symmetry) {
    model.spec = cov_compound_symmetry(p, rho);
  } else {
    model.spec = cov_two_entry(p, rho);
  }
  model.min_eig_before = model.min_eig_after = model.spec.min_eigenvalue();
  return model;
}

PdRepair ensure_pd_report(const Eigen::MatrixXd& raw, double eps) {
  CovarianceSpec checked(raw);  // validates square + symmetric
  PdRepair out;
  out.min_eig_before = checked.min_eigenvalue();
  if (out.min_eig_before > 0.0) {
    out.min_eig_after = out.min_eig_before;
    out.spec = std::move(checked);
    return out;
  }
  Eigen::MatrixXd m = raw;
  m.diagonal().array() += eps - out.min_eig_before;
  out.repaired = true;
  out.spec = CovarianceSpec(std::move(m));
  out.min_eig_after = out.spec.min_eigenvalue();
  return out;
}

CovarianceSpec ensure_pd(const Eigen::MatrixXd& raw, double eps) {
  return ensure_pd_report(raw, eps).spec;
}

MvnSampler::MvnSampler(const CovarianceSpec& spec) {
  Eigen::LLT<Eigen::MatrixXd> llt(spec.entries());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::invalid_covariance, "Cholesky factorisation failed");
  }
  lower_ = llt.matrixL();
}

DataMatrix MvnSampler::draw(Index n, std::uint64_t seed, std::uint64_t stream) const {
  if (n < 1) throw Error(ErrorKind::invalid_parameter, "sample size must be positive");
  const Index p = lower_.rows();
  Engine engine = make_stream(seed, StreamDomain::sample, stream);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(n, p);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < p; ++c) z(r, c) = normal(engine);
  }
  // Row r of X is (L z_r)^T = z_r^T L^T.
  Eigen::MatrixXd x = z * lower_.transpose();
  return DataMatrix(std::move(x), false);
}

DataMatrix sample_mvn(const CovarianceSpec& spec, Index n, std::uint64_t seed,
                      std::uint64_t stream) {
  return MvnSampler(spec).draw(n, seed, stream);
}

}  // namespace mxpbf
