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

// JSON / CSV forms of result types. Variable indices are one-based in every
// serialized artifact and zero-based in memory.

#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "mxpbf/evalmetrics.hpp"
#include "mxpbf/hyptest.hpp"
#include "mxpbf/simulate.hpp"
#include "mxpbf/support.hpp"

namespace mxpbf {

/// {statistic, argmax:[i,j], decision, pvalue?, threshold, n, p, gamma, alpha}
nlohmann::ordered_json to_json(const TestOutcome& outcome);
/// {threshold, symmetrized, pairs:[[i,j],...]}
nlohmann::ordered_json to_json(const SupportEstimate& estimate);
/// {chosen, splits, seed, grid:[...], mean_mse:[...]}
nlohmann::ordered_json to_json(const CVReport& report);
/// {kind, p, rho, repaired, min_eig_before}
nlohmann::ordered_json to_json(const CovModel& model);
nlohmann::ordered_json to_json(const HyperParams& hp);
nlohmann::ordered_json to_json(const Confusion& c);

const char* to_string(Decision d) noexcept;

/// "i,j" per line, with header.
void write_edge_list(std::ostream& out, const SupportEstimate& estimate);
/// "fpr,tpr,threshold" per point, with header.
void write_roc_csv(std::ostream& out, const RocCurve& roc);
/// "threshold,mean_mse" per grid point, with header.
void write_cv_table(std::ostream& out, const CVReport& report);
/// One value per line, with header `name`.
void write_column(std::ostream& out, std::span<const double> values, const std::string& name);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace mxpbf
