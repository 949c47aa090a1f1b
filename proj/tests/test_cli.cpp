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

#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "mxpbf/dataio.hpp"
#include "mxpbf/hyptest.hpp"
#include "mxpbf/parallel.hpp"
#include "mxpbf/simulate.hpp"
#include "testutil.hpp"

namespace mxpbf {
namespace {

using testing::read_file;
using testing::temp_dir;
using testing::write_file;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "mxpbf");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = temp_dir("cli");
    data_ = (dir_ / "data.csv").string();
    save_matrix(data_, sample_mvn(cov_two_entry(12, 0.8), 80, 3).values());
  }
  void TearDown() override { set_num_threads(0); }
  std::filesystem::path dir_;
  std::string data_;
};

TEST_F(Cli, DiagonalWithSize) {
  const Result r = run({"test-diagonal", "--input", data_, "--size", "0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.contains("statistic"));
  EXPECT_TRUE(j.contains("pvalue"));
  EXPECT_EQ(j["decision"], "reject_null");
  EXPECT_EQ(j["argmax"], (nlohmann::json{1, 2}));
  EXPECT_EQ(j["config"]["hyperparams"]["alpha"], j["alpha"]);
  EXPECT_NE(r.err.find("warning"), std::string::npos);  // p < 50
}

TEST_F(Cli, DiagonalMatchesLibrary) {
  const Result r = run({"test-diagonal", "--input", data_, "--no-center", "--alpha", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const DataMatrix d = load_matrix(data_);
  const HyperParams hp = with_alpha(default_hyperparams(80, 12, TestKind::diagonality), 80, 12, 2.0);
  const TestOutcome t = diagonality_test(d, hp);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["statistic"].get<double>(), t.statistic);
  EXPECT_EQ(j["gamma"].get<double>(), hp.gamma);
  EXPECT_EQ(j["config"]["centered"], false);
}

TEST_F(Cli, SizeAndThresholdAreExclusive) {
  EXPECT_EQ(run({"test-diagonal", "--input", data_, "--size", "0.05", "--threshold", "1"}).code,
            cli::kUsage);
}

TEST_F(Cli, OneSampleWithSigma0) {
  Eigen::MatrixXd s = cov_two_entry(12, 0.8).entries();
  const auto s0 = (dir_ / "s0.csv").string();
  save_matrix(s0, s);
  const Result plain = run({"test-one-sample", "--input", data_});
  const Result whitened = run({"test-one-sample", "--input", data_, "--sigma0", s0});
  ASSERT_EQ(plain.code, 0) << plain.err;
  ASSERT_EQ(whitened.code, 0) << whitened.err;
  const auto a = nlohmann::json::parse(plain.out);
  const auto b = nlohmann::json::parse(whitened.out);
  EXPECT_EQ(a["decision"], "reject_null");
  EXPECT_LT(b["statistic"].get<double>(), a["statistic"].get<double>());
  EXPECT_EQ(b["config"]["sigma0"], s0);
}

TEST_F(Cli, PairUsesOneBasedIndices) {
  const Result r = run({"test-pair", "--input", data_, "--i", "1", "--j", "2", "--alpha", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["gamma"].get<double>(), 1.0 / (80.0 * 80.0));
  EXPECT_EQ(j["decision"], "reject_null");
  EXPECT_EQ(run({"test-pair", "--input", data_, "--i", "1", "--j", "1"}).code, cli::kValidation);
  EXPECT_EQ(run({"test-pair", "--input", data_, "--i", "0", "--j", "2"}).code, cli::kValidation);
}

TEST_F(Cli, SelectSupportCsvAndJson) {
  const auto out = (dir_ / "edges.csv").string();
  const Result r = run({"select-support", "--input", data_, "--threshold", "0", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = read_file(out);
  EXPECT_EQ(csv.rfind("i,j\n1,2\n", 0), 0u) << csv;
  const auto side = nlohmann::json::parse(read_file(out + ".json"));
  EXPECT_TRUE(side["config"].contains("hyperparams"));

  const Result j = run({"select-support", "--input", data_, "--format", "json"});
  ASSERT_EQ(j.code, 0);
  EXPECT_EQ(nlohmann::json::parse(j.out)["pairs"][0], (nlohmann::json{1, 2}));
}

TEST_F(Cli, CvThresholdTable) {
  const auto table = (dir_ / "cv.csv").string();
  const Result r = run({"cv-threshold", "--input", data_, "--nsplits", "4", "--seed", "5",
                        "--table", table, "--grid-min", "-1", "--grid-max", "1", "--grid-step",
                        "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["grid"].size(), 5u);
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["config"]["empty_rule"], "null-model");
  EXPECT_EQ(read_file(table).rfind("threshold,mean_mse\n-1,", 0), 0u);
  EXPECT_EQ(run({"cv-threshold", "--input", data_, "--grid-step", "0"}).code, cli::kValidation);
  EXPECT_EQ(run({"cv-threshold", "--input", data_, "--fit-beta-on", "both"}).code, cli::kUsage);
}

TEST_F(Cli, SimulateWritesDataAndRecord) {
  const auto out = (dir_ / "sim.csv").string();
  const auto cov = (dir_ / "sim_cov.csv").string();
  const Result r = run({"simulate", "--model", "banded1", "--p", "4", "--n", "7", "--seed", "2",
                        "--out", out, "--cov-out", cov});
  ASSERT_EQ(r.code, 0) << r.err;
  const DataMatrix d = load_matrix(out);
  EXPECT_EQ(d.n(), 7);
  EXPECT_EQ(d.p(), 4);
  EXPECT_TRUE((d.values().array() == sample_mvn(cov_banded_setting1(4).spec, 7, 2).values().array()).all());
  EXPECT_NEAR(load_covariance(cov)(0, 0), 1.81, 1e-12);
  const auto rec = nlohmann::json::parse(read_file(out + ".json"));
  EXPECT_EQ(rec["seed"], 2);
  EXPECT_EQ(rec["model"]["repaired"], true);
  EXPECT_EQ(run({"simulate", "--model", "two-entry", "--p", "3", "--n", "5", "--rho", "1.5"}).code,
            cli::kValidation);
}

TEST_F(Cli, NullCalibrationAndRoc) {
  const auto stats = (dir_ / "null.csv").string();
  const Result r = run({"null-calibration", "--n", "40", "--p", "10", "--reps", "20", "--seed",
                        "3", "--stats-out", stats});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.contains("c_np"));
  EXPECT_TRUE(j.contains("ks_distance"));
  EXPECT_TRUE(j.contains("empirical_size"));

  const auto alt = write_file(dir_ / "alt.txt", "1000\n2000\n3000\n");
  const auto roc = (dir_ / "roc.csv").string();
  const Result rr = run({"roc", "--null", stats, "--alt", alt.string(), "--out", roc});
  ASSERT_EQ(rr.code, 0) << rr.err;
  EXPECT_EQ(nlohmann::json::parse(read_file(roc + ".json"))["auc"], 1.0);
  EXPECT_EQ(read_file(roc).rfind("fpr,tpr,threshold\n0,0,inf\n", 0), 0u);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({"test-diagonal", "--input", (dir_ / "missing.csv").string()}).code, cli::kFile);
  EXPECT_EQ(run({"test-diagonal"}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"test-diagonal", "--input", data_, "--bogus"}).code, cli::kUsage);
  const auto bad = write_file(dir_ / "bad.csv", "1,2\n3\n").string();
  EXPECT_EQ(run({"test-diagonal", "--input", bad}).code, cli::kValidation);
  const auto flat = write_file(dir_ / "flat.csv", "1,2\n1,3\n1,4\n").string();
  EXPECT_EQ(run({"test-diagonal", "--input", flat}).code, cli::kNumeric);
  const auto twin = write_file(dir_ / "twin.csv", "1,1\n2,2\n-3,-3\n5,5\n").string();
  EXPECT_EQ(run({"test-one-sample", "--input", twin, "--no-center"}).code, cli::kNumeric);
}

TEST_F(Cli, HelpListsDefaults) {
  const Result top = run({"--help"});
  EXPECT_EQ(top.code, 0);
  EXPECT_NE(top.out.find("cv-threshold"), std::string::npos);
  const Result cv = run({"cv-threshold", "--help"});
  EXPECT_EQ(cv.code, 0);
  for (const char* needle : {"-7", "10", "0.2", "50", "ceil(n/3)"}) {
    EXPECT_NE(cv.out.find(needle), std::string::npos) << needle;
  }
  const Result one = run({"test-one-sample", "--help"});
  EXPECT_NE(one.out.find("100"), std::string::npos);
  EXPECT_NE(one.out.find("8.01"), std::string::npos);
}

TEST_F(Cli, OutputIndependentOfThreads) {
  std::string first;
  for (const char* t : {"1", "2", "8"}) {
    const Result r = run({"--threads", t, "cv-threshold", "--input", data_, "--nsplits", "6"});
    ASSERT_EQ(r.code, 0);
    if (first.empty()) first = r.out;
    EXPECT_EQ(r.out, first) << "threads=" << t;
  }
}

}  // namespace
}  // namespace mxpbf
