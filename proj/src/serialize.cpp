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

#include "mxpbf/serialize.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

namespace mxpbf {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

const char* to_string(Decision d) noexcept {
  return d == Decision::reject_null ? "reject_null" : "retain_null";
}

nlohmann::ordered_json to_json(const TestOutcome& o) {
  nlohmann::ordered_json j;
  j["statistic"] = o.statistic;
  j["argmax"] = {o.argmax.first + 1, o.argmax.second + 1};
  j["decision"] = to_string(o.decision);
  if (o.pvalue) j["pvalue"] = *o.pvalue;
  j["threshold"] = o.threshold_used;
  j["n"] = o.n;
  j["p"] = o.p;
  j["gamma"] = o.gamma;
  j["alpha"] = o.alpha;
  if (o.collinear_pairs > 0) j["collinear_pairs"] = o.collinear_pairs;
  if (!o.warnings.empty()) j["warnings"] = o.warnings;
  return j;
}

nlohmann::ordered_json to_json(const SupportEstimate& e) {
  nlohmann::ordered_json j;
  j["threshold"] = e.threshold;
  j["symmetrized"] = e.symmetrized;
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& [a, b] : e.pairs) pairs.push_back({a + 1, b + 1});
  j["pairs"] = std::move(pairs);
  return j;
}

nlohmann::ordered_json to_json(const CVReport& r) {
  nlohmann::ordered_json j;
  j["chosen"] = r.chosen;
  j["splits"] = r.splits;
  j["seed"] = r.seed;
  j["grid"] = r.grid;
  j["mean_mse"] = r.mean_mse;
  return j;
}

nlohmann::ordered_json to_json(const CovModel& m) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(m.kind);
  j["p"] = m.p;
  j["rho"] = m.rho;
  j["repaired"] = m.repaired;
  j["min_eig_before"] = m.min_eig_before;
  j["min_eig_after"] = m.min_eig_after;
  return j;
}

nlohmann::ordered_json to_json(const HyperParams& hp) {
  nlohmann::ordered_json j;
  j["a0"] = hp.a0;
  j["K"] = hp.K;
  j["alpha"] = hp.alpha;
  j["gamma"] = hp.gamma;
  j["gamma_mode"] = hp.gamma_mode == GammaMode::n_only ? "n_only" : "max_np";
  if (hp.b0_override) {
    j["b0"] = *hp.b0_override;
  } else {
    j["b0"] = "tau_ij0_sq*(a0-1)";
  }
  return j;
}

nlohmann::ordered_json to_json(const Confusion& c) {
  nlohmann::ordered_json j;
  j["tp"] = c.tp;
  j["tn"] = c.tn;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  return j;
}

void write_edge_list(std::ostream& out, const SupportEstimate& e) {
  out << "i,j\n";
  for (const auto& [a, b] : e.pairs) out << (a + 1) << ',' << (b + 1) << '\n';
}

void write_roc_csv(std::ostream& out, const RocCurve& roc) {
  out << "fpr,tpr,threshold\n";
  for (std::size_t k = 0; k < roc.points.size(); ++k) {
    out << format_double(roc.points[k].first) << ',' << format_double(roc.points[k].second) << ','
        << format_double(roc.thresholds[k]) << '\n';
  }
}

void write_cv_table(std::ostream& out, const CVReport& r) {
  out << "threshold,mean_mse\n";
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    out << format_double(r.grid[k]) << ',' << format_double(r.mean_mse[k]) << '\n';
  }
}

void write_column(std::ostream& out, std::span<const double> values, const std::string& name) {
  out << name << '\n';
  for (const double v : values) out << format_double(v) << '\n';
}

}  // namespace mxpbf
