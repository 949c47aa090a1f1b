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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mxpbf/mxpbf.hpp"

namespace mxpbf::cli {

namespace {

using Json = nlohmann::ordered_json;

struct HpFlags {
  double K = 100.0;
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::optional<double> a0;
  std::optional<double> b0;
};

void add_hp_flags(CLI::App* cmd, HpFlags& hp, bool with_prior) {
  cmd->add_option("--alpha", hp.alpha,
                  "Dispersion exponent; gamma = (n v p)^-alpha. Default 8.01(1 - 1/ln n) for "
                  "the one-sample test, 4.01(1 - 1/ln n) otherwise");
  cmd->add_option("--gamma", hp.gamma, "Use this gamma directly (overrides --alpha)");
  if (with_prior) {
    cmd->add_option("--K", hp.K, "Prior coefficient of variation of tau^2; a0 = 2 + K^-2")
        ->capture_default_str();
    cmd->add_option("--a0", hp.a0, "Override the inverse-gamma shape a0");
    cmd->add_option("--b0", hp.b0,
                    "Override the inverse-gamma scale (default per pair: tau_ij0^2 (a0 - 1))");
  }
}

HyperParams resolve(const HpFlags& flags, Index n, Index p, TestKind kind) {
  HyperParams hp = default_hyperparams(n, p, kind, flags.K);
  if (flags.alpha) hp = with_alpha(hp, n, p, *flags.alpha);
  if (flags.gamma) {
    if (!(*flags.gamma > 0.0)) throw Error(ErrorKind::invalid_parameter, "gamma must be positive");
    hp.gamma = *flags.gamma;
  }
  if (flags.a0) hp.a0 = *flags.a0;
  if (flags.b0) hp.b0_override = *flags.b0;
  return hp;
}

struct InputFlags {
  std::string input;
  bool no_center = false;
};

void add_input_flags(CLI::App* cmd, InputFlags& in) {
  cmd->add_option("--input", in.input, "Observation matrix (.csv, or .tsv/.tab/.txt)")->required();
  cmd->add_flag("--no-center", in.no_center, "Do not center columns before testing");
}

DataMatrix load_input(const InputFlags& in) {
  DataMatrix data = load_matrix(in.input);
  return in.no_center ? data : center_columns(data);
}

Json input_record(const InputFlags& in) {
  Json j;
  j["input"] = in.input;
  j["centered"] = !in.no_center;
  return j;
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  file << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Sidecar record for CSV artifacts written to a file.
void write_record(const Json& record, const std::string& out_path) {
  if (!out_path.empty()) write_text(dump(record), out_path + ".json", std::cout);
}

void report_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

std::vector<double> read_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r,");
    std::string_view token(line.data() + first, last - first + 1);
    // Keep only the first field of a delimited line.
    token = token.substr(0, token.find_first_of(",\t"));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v)) {
      if (values.empty() && line_no == 1) continue;  // header
      throw Error(ErrorKind::malformed_input,
                  path + ": cannot parse value at line " + std::to_string(line_no));
    }
    values.push_back(v);
  }
  if (values.empty()) throw Error(ErrorKind::malformed_input, path + ": no values");
  return values;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io: return kFile;
    case ErrorKind::degenerate_data:
    case ErrorKind::collinearity:
    case ErrorKind::degenerate_split: return kNumeric;
    default: return kValidation;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximum pairwise Bayes factor tests for covariance structure", "mxpbf"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 std::string("Cap on worker threads (default: $") + kThreadsEnvVar +
                     " or all cores); results do not depend on it");

  // test-one-sample
  auto* one = app.add_subcommand("test-one-sample", "H0: Sigma = I (or Sigma0 with --sigma0)");
  InputFlags one_in;
  HpFlags one_hp;
  std::string one_sigma0;
  double one_threshold = 0.0;
  std::string one_out;
  add_input_flags(one, one_in);
  add_hp_flags(one, one_hp, true);
  one->add_option("--sigma0", one_sigma0, "Null covariance; data are mapped by Sigma0^{-1/2}");
  one->add_option("--threshold", one_threshold, "Reject when 2 log B_max exceeds this")
      ->capture_default_str();
  one->add_option("--out", one_out, "JSON result path (default stdout)");

  // test-diagonal
  auto* diag = app.add_subcommand("test-diagonal", "H0: Sigma is diagonal");
  InputFlags diag_in;
  HpFlags diag_hp;
  std::optional<double> diag_threshold;
  std::optional<double> diag_size;
  std::string diag_out;
  add_input_flags(diag, diag_in);
  add_hp_flags(diag, diag_hp, false);
  auto* thr_opt = diag->add_option("--threshold", diag_threshold,
                                   "Reject when 2 log B~_max exceeds this (default 0)");
  diag->add_option("--size", diag_size,
                   "Asymptotic test of this size via the extreme-value limit (adds a p-value)")
      ->excludes(thr_opt);
  diag->add_option("--out", diag_out, "JSON result path (default stdout)");

  // test-pair
  auto* pair = app.add_subcommand("test-pair", "H0: sigma_ij = 0 for one pair (gamma = n^-alpha)");
  InputFlags pair_in;
  HpFlags pair_hp;
  Index pair_i = 0;
  Index pair_j = 0;
  double pair_threshold = 0.0;
  std::string pair_out;
  add_input_flags(pair, pair_in);
  add_hp_flags(pair, pair_hp, false);
  pair->add_option("--i", pair_i, "First column (one-based)")->required();
  pair->add_option("--j", pair_j, "Second column (one-based)")->required();
  pair->add_option("--threshold", pair_threshold, "Reject when 2 log B~ exceeds this")
      ->capture_default_str();
  pair->add_option("--out", pair_out, "JSON result path (default stdout)");

  // select-support
  auto* sel = app.add_subcommand("select-support", "Pairs with 2 log B~_10 above a threshold");
  InputFlags sel_in;
  HpFlags sel_hp;
  double sel_threshold = 0.0;
  bool sel_no_sym = false;
  std::string sel_format = "csv";
  std::string sel_out;
  add_input_flags(sel, sel_in);
  add_hp_flags(sel, sel_hp, false);
  sel->add_option("--threshold", sel_threshold, "Selection threshold C_sel")->capture_default_str();
  sel->add_flag("--no-symmetrize", sel_no_sym,
                "Score pair (i,j) by the (i|j) regression only instead of max of both directions");
  sel->add_option("--format", sel_format, "csv (edge list) or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sel->add_option("--out", sel_out, "Output path (default stdout)");

  // cv-threshold
  auto* cv = app.add_subcommand(
      "cv-threshold", "Choose C_sel by repeated random splits (test fraction ceil(n/3))");
  InputFlags cv_in;
  HpFlags cv_hp;
  double grid_min = -7.0;
  double grid_max = 10.0;
  double grid_step = 0.2;
  int nsplits = 50;
  std::uint64_t cv_seed = 1;
  bool cv_no_sym = false;
  std::string fit_on = "test";
  std::string empty_rule = "null-model";
  std::string cv_table;
  std::string cv_out;
  add_input_flags(cv, cv_in);
  add_hp_flags(cv, cv_hp, false);
  cv->add_option("--grid-min", grid_min, "Smallest threshold")->capture_default_str();
  cv->add_option("--grid-max", grid_max, "Largest threshold")->capture_default_str();
  cv->add_option("--grid-step", grid_step, "Grid increment")->capture_default_str();
  cv->add_option("--nsplits", nsplits, "Number of random splits")->capture_default_str();
  cv->add_option("--seed", cv_seed, "Master seed for the splits")->capture_default_str();
  cv->add_flag("--no-symmetrize", cv_no_sym, "Use the (i|j) score only");
  cv->add_option("--fit-beta-on", fit_on, "Rows used to fit the slope: test or train")
      ->check(CLI::IsMember({"test", "train"}))
      ->capture_default_str();
  cv->add_option("--empty-rule", empty_rule,
                 "Error of a column with no selected partner: null-model (held-out variance) "
                 "or zero")
      ->check(CLI::IsMember({"null-model", "zero"}))
      ->capture_default_str();
  cv->add_option("--table", cv_table, "Also write the threshold,mean_mse table as CSV");
  cv->add_option("--out", cv_out, "JSON result path (default stdout)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Draw N_p(0, Sigma0) data from a covariance model");
  std::string sim_model = "identity";
  Index sim_p = 0;
  Index sim_n = 0;
  double sim_rho = 0.0;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  std::string sim_cov_out;
  sim->add_option("--model", sim_model,
                  "identity, compound-symmetry, two-entry, banded1 or banded2")
      ->check(CLI::IsMember({"identity", "compound-symmetry", "two-entry", "banded1", "banded2"}))
      ->capture_default_str();
  sim->add_option("--p", sim_p, "Dimension")->required();
  sim->add_option("--n", sim_n, "Number of observations")->required();
  sim->add_option("--rho", sim_rho, "Signal strength (compound-symmetry, two-entry)")
      ->capture_default_str();
  sim->add_option("--seed", sim_seed, "Seed")->capture_default_str();
  sim->add_option("--out", sim_out, "Data CSV path (default stdout)");
  sim->add_option("--cov-out", sim_cov_out, "Also write the covariance matrix (CSV) here");

  // null-calibration
  auto* cal = app.add_subcommand(
      "null-calibration", "Monte Carlo check of the extreme-value null of the diagonality max");
  Index cal_n = 200;
  Index cal_p = 100;
  int cal_reps = 500;
  std::uint64_t cal_seed = 1;
  double cal_size = 0.05;
  HpFlags cal_hp;
  std::string cal_stats;
  std::string cal_out;
  cal->add_option("--n", cal_n, "Observations per replicate")->capture_default_str();
  cal->add_option("--p", cal_p, "Dimension")->capture_default_str();
  cal->add_option("--reps", cal_reps, "Replicates")->capture_default_str();
  cal->add_option("--seed", cal_seed, "Master seed")->capture_default_str();
  cal->add_option("--size", cal_size, "Nominal size for the empirical size check")
      ->capture_default_str();
  add_hp_flags(cal, cal_hp, false);
  cal->add_option("--stats-out", cal_stats, "Write the raw statistics (CSV)");
  cal->add_option("--out", cal_out, "JSON result path (default stdout)");

  // roc
  auto* roc = app.add_subcommand("roc", "ROC curve and AUC from null/alternative statistics");
  std::string roc_null;
  std::string roc_alt;
  std::string roc_out;
  roc->add_option("--null", roc_null, "Statistics under H0, one per line")->required();
  roc->add_option("--alt", roc_alt, "Statistics under H1, one per line")->required();
  roc->add_option("--out", roc_out, "CSV path (fpr,tpr,threshold); AUC goes to <out>.json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kUsage;
  }

  configure_threads_from_env();
  if (threads > 0) set_num_threads(threads);

  try {
    if (one->parsed()) {
      DataMatrix data = load_input(one_in);
      if (!one_sigma0.empty()) data = transform_null(data, load_covariance(one_sigma0));
      const HyperParams hp = resolve(one_hp, data.n(), data.p(), TestKind::one_sample);
      const TestOutcome res = one_sample_test(data, hp, one_threshold);
      report_warnings(res.warnings, err);
      Json j = to_json(res);
      Json cfg = input_record(one_in);
      cfg["command"] = "test-one-sample";
      cfg["sigma0"] = one_sigma0.empty() ? Json() : Json(one_sigma0);
      cfg["hyperparams"] = to_json(hp);
      j["config"] = cfg;
      write_text(dump(j), one_out, out);
    } else if (diag->parsed()) {
      const DataMatrix data = load_input(diag_in);
      const HyperParams hp = resolve(diag_hp, data.n(), data.p(), TestKind::diagonality);
      DecisionRule rule = ThresholdRule{diag_threshold.value_or(0.0)};
      if (diag_size) rule = AsymptoticSizeRule{*diag_size};
      const TestOutcome res = diagonality_test(data, hp, rule);
      report_warnings(res.warnings, err);
      Json j = to_json(res);
      Json cfg = input_record(diag_in);
      cfg["command"] = "test-diagonal";
      cfg["rule"] = diag_size ? Json{{"asymptotic_size", *diag_size}}
                              : Json{{"threshold", diag_threshold.value_or(0.0)}};
      if (diag_size) cfg["c_np"] = c_np(data.n(), data.p(), hp.gamma);
      cfg["hyperparams"] = to_json(hp);
      j["config"] = cfg;
      write_text(dump(j), diag_out, out);
    } else if (pair->parsed()) {
      const DataMatrix data = load_input(pair_in);
      const HyperParams hp =
          resolve(pair_hp, data.n(), data.p(), TestKind::pairwise_independence);
      const TestOutcome res =
          pairwise_independence_test(data, pair_i - 1, pair_j - 1, hp, pair_threshold);
      report_warnings(res.warnings, err);
      Json j = to_json(res);
      Json cfg = input_record(pair_in);
      cfg["command"] = "test-pair";
      cfg["pair"] = {pair_i, pair_j};
      cfg["hyperparams"] = to_json(hp);
      j["config"] = cfg;
      write_text(dump(j), pair_out, out);
    } else if (sel->parsed()) {
      const DataMatrix data = load_input(sel_in);
      const HyperParams hp = resolve(sel_hp, data.n(), data.p(), TestKind::support);
      const SupportEstimate est = select_support(data, hp, sel_threshold, !sel_no_sym);
      Json cfg = input_record(sel_in);
      cfg["command"] = "select-support";
      cfg["hyperparams"] = to_json(hp);
      if (sel_format == "json") {
        Json j = to_json(est);
        j["config"] = cfg;
        write_text(dump(j), sel_out, out);
      } else {
        std::ostringstream csv;
        write_edge_list(csv, est);
        write_text(csv.str(), sel_out, out);
        Json record = to_json(est);
        record.erase("pairs");
        record["n_pairs"] = est.pairs.size();
        record["config"] = cfg;
        write_record(record, sel_out);
      }
    } else if (cv->parsed()) {
      if (!(grid_step > 0.0) || grid_max < grid_min) {
        throw Error(ErrorKind::domain, "threshold grid is empty");
      }
      const DataMatrix data = load_input(cv_in);
      const HyperParams hp = resolve(cv_hp, data.n(), data.p(), TestKind::support);
      CvOptions opts;
      opts.grid.clear();
      const auto steps = static_cast<int>(std::floor((grid_max - grid_min) / grid_step + 1e-9));
      for (int k = 0; k <= steps; ++k) opts.grid.push_back(grid_min + grid_step * k);
      opts.nsplits = nsplits;
      opts.seed = cv_seed;
      opts.mse.symmetrize = !cv_no_sym;
      opts.mse.fit = fit_on == "train" ? BetaFit::train : BetaFit::test;
      opts.mse.empty = empty_rule == "zero" ? EmptyRule::zero : EmptyRule::null_model;
      const CVReport rep = cv_select_threshold(data, hp, opts);
      Json j = to_json(rep);
      Json cfg = input_record(cv_in);
      cfg["command"] = "cv-threshold";
      cfg["grid"] = {{"min", grid_min}, {"max", grid_max}, {"step", grid_step}};
      cfg["test_fraction"] = "ceil(n/3)";
      cfg["symmetrize"] = !cv_no_sym;
      cfg["fit_beta_on"] = fit_on;
      cfg["empty_rule"] = empty_rule;
      cfg["hyperparams"] = to_json(hp);
      j["config"] = cfg;
      write_text(dump(j), cv_out, out);
      if (!cv_table.empty()) {
        std::ostringstream csv;
        write_cv_table(csv, rep);
        write_text(csv.str(), cv_table, out);
      }
    } else if (sim->parsed()) {
      const CovKind kind = *parse_cov_kind(sim_model);
      const CovModel model = make_cov_model(kind, sim_p, sim_rho);
      const DataMatrix data = sample_mvn(model.spec, sim_n, sim_seed);
      std::ostringstream csv;
      write_matrix(csv, data.values(), TableFormat::csv);
      write_text(csv.str(), sim_out, out);
      if (!sim_cov_out.empty()) {
        std::ostringstream cov;
        write_matrix(cov, model.spec.entries(), TableFormat::csv);
        write_text(cov.str(), sim_cov_out, out);
      }
      Json record;
      record["command"] = "simulate";
      record["model"] = to_json(model);
      record["n"] = sim_n;
      record["seed"] = sim_seed;
      write_record(record, sim_out);
    } else if (cal->parsed()) {
      const HyperParams hp = resolve(cal_hp, cal_n, cal_p, TestKind::diagonality);
      const std::vector<double> stats = mc_null_statistics(cal_n, cal_p, hp, cal_reps, cal_seed);
      const double centre = c_np(cal_n, cal_p, hp.gamma);
      const double cutoff = centre + gumbel_quantile(1.0 - cal_size);
      std::vector<double> centred;
      centred.reserve(stats.size());
      double sum = 0.0;
      int rejected = 0;
      for (const double s : stats) {
        centred.push_back(s - centre);
        sum += s - centre;
        if (s > cutoff) ++rejected;
      }
      Json j;
      j["n"] = cal_n;
      j["p"] = cal_p;
      j["reps"] = cal_reps;
      j["seed"] = cal_seed;
      j["c_np"] = centre;
      j["ks_distance"] = ks_distance(centred, gumbel_cdf);
      j["nominal_size"] = cal_size;
      j["empirical_size"] = static_cast<double>(rejected) / cal_reps;
      j["mean_centered"] = sum / cal_reps;
      j["hyperparams"] = to_json(hp);
      write_text(dump(j), cal_out, out);
      if (!cal_stats.empty()) {
        std::ostringstream csv;
        write_column(csv, stats, "statistic");
        write_text(csv.str(), cal_stats, out);
      }
    } else if (roc->parsed()) {
      const std::vector<double> null_stats = read_values(roc_null);
      const std::vector<double> alt_stats = read_values(roc_alt);
      const RocCurve curve = roc_curve(null_stats, alt_stats);
      std::ostringstream csv;
      write_roc_csv(csv, curve);
      write_text(csv.str(), roc_out, out);
      Json record;
      record["command"] = "roc";
      record["null"] = roc_null;
      record["alt"] = roc_alt;
      record["auc"] = curve.auc;
      record["points"] = curve.points.size();
      write_record(record, roc_out);
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}

}  // namespace mxpbf::cli
