#include "mpf_cli/cli.hpp"

#include "mpf/model_io.hpp"
#include "mpf/models.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using mpf::cli::run;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mpf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int call(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  void write(const std::string& p, const std::string& text) const { std::ofstream(p) << text; }

  int generate(const std::string& model_out, const std::string& data_out, std::size_t d = 5, int n = 2000) {
    return call({"gen", "--random-coupling", std::to_string(d), "--variance", "0.25", "--seed", "3", "--model-out",
                 model_out, "-n", std::to_string(n), "-o", data_out});
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

}  // namespace

TEST_F(CliTest, GenIsReproducibleAndWritesSidecars) {
  ASSERT_EQ(generate(path("truth.json"), path("a.mpfd")), mpf::cli::kExitOk) << err_.str();
  ASSERT_EQ(generate(path("truth2.json"), path("b.mpfd")), mpf::cli::kExitOk) << err_.str();
  EXPECT_EQ(slurp(path("a.mpfd")), slurp(path("b.mpfd")));
  EXPECT_EQ(slurp(path("truth.json")), slurp(path("truth2.json")));
  const auto sidecar = nlohmann::json::parse(slurp(path("a.mpfd.json")));
  EXPECT_EQ(sidecar.at("seed"), 3);
  EXPECT_EQ(sidecar.at("burn_in"), 500);
  EXPECT_EQ(sidecar.at("thin"), 5);
  const auto manifest = nlohmann::json::parse(slurp(path("a.mpfd.manifest.json")));
  EXPECT_EQ(manifest.at("command"), "gen");
  EXPECT_EQ(manifest.at("exit_code"), 0);
  EXPECT_EQ(manifest.at("outputs").size(), 3u);
  EXPECT_EQ(manifest.at("outputs")[0].at("sha256").get<std::string>().size(), 64u);
}

TEST_F(CliTest, GenFromModelFileWritesCsv) {
  mpf::IsingModel m(3);
  mpf::save_model(path("m.json"), m, mpf::ParamVector(m.layout()));
  ASSERT_EQ(call({"gen", "--model", path("m.json"), "-n", "10", "-o", path("d.csv")}), 0) << err_.str();
  std::istringstream csv(slurp(path("d.csv")));
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  EXPECT_EQ(rows, 10);
}

TEST_F(CliTest, UsageAndParseErrorsExitTwo) {
  EXPECT_EQ(call({}), mpf::cli::kExitUsage);
  EXPECT_EQ(call({"frobnicate"}), mpf::cli::kExitUsage);
  EXPECT_EQ(call({"gen", "-n", "10", "-o", path("x.mpfd")}), mpf::cli::kExitUsage);
  write(path("bad.json"), "{\"kind\": \"ising\", ");
  EXPECT_EQ(call({"gen", "--model", path("bad.json"), "-n", "10", "-o", path("x.mpfd")}), mpf::cli::kExitUsage);
  EXPECT_FALSE(err_.str().empty());
  EXPECT_FALSE(fs::exists(path("x.mpfd")));
}

TEST_F(CliTest, FitRejectsDimensionMismatch) {
  ASSERT_EQ(generate(path("truth.json"), path("data.mpfd")), 0);
  EXPECT_EQ(call({"fit", "--kind", "ising", "--data", path("data.mpfd"), "--d", "4", "-o", path("fit.json")}),
            mpf::cli::kExitUsage);
  EXPECT_FALSE(fs::exists(path("fit.json")));
}

TEST_F(CliTest, FlowTimeDoesNotMoveTheMinimizer) {
  ASSERT_EQ(generate(path("truth.json"), path("data.mpfd")), 0);
  ASSERT_EQ(call({"fit", "--kind", "ising", "--data", path("data.mpfd"), "--eps", "1", "-o", path("a.json")}), 0)
      << out_.str() << err_.str();
  ASSERT_EQ(call({"fit", "--kind", "ising", "--data", path("data.mpfd"), "--eps", "2", "-o", path("b.json")}), 0)
      << out_.str() << err_.str();
  const auto a = mpf::load_model(path("a.json"));
  const auto b = mpf::load_model(path("b.json"));
  const Eigen::MatrixXd sa = mpf::IsingModel::symmetrized(a.params.block("J"));
  const Eigen::MatrixXd sb = mpf::IsingModel::symmetrized(b.params.block("J"));
  EXPECT_LE((sa - sb).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_TRUE(fs::exists(path("a.trace.csv")));
  EXPECT_TRUE(fs::exists(path("a.trace.jsonl")));
  const auto manifest = nlohmann::json::parse(slurp(path("a.json.manifest.json")));
  EXPECT_EQ(manifest.at("config").at("result").at("termination"), "gradient-tolerance");
}

TEST_F(CliTest, FitReportsNonConvergence) {
  ASSERT_EQ(generate(path("truth.json"), path("data.mpfd")), 0);
  EXPECT_EQ(call({"fit", "--kind", "ising", "--data", path("data.mpfd"), "--max-iter", "1", "-o", path("f.json")}),
            mpf::cli::kExitNotConverged);
  EXPECT_TRUE(fs::exists(path("f.json")));
}

TEST_F(CliTest, EvalAgainstItselfIsZero) {
  ASSERT_EQ(generate(path("truth.json"), path("data.mpfd")), 0);
  ASSERT_EQ(call({"eval", "--model", path("truth.json"), "--truth", path("truth.json"), "-o", path("e.json")}), 0)
      << err_.str();
  const auto report = nlohmann::json::parse(slurp(path("e.json")));
  EXPECT_EQ(report.at("truth").at("moments_path"), "exact");
  EXPECT_EQ(report.at("truth").at("correlation_mae").at("second_moment_offdiag"), 0.0);
  EXPECT_EQ(report.at("truth").at("coupling_mae_symmetrized"), 0.0);
  EXPECT_EQ(report.at("truth").at("kl_truth_to_model"), 0.0);
  ASSERT_EQ(call({"eval", "--model", path("truth.json"), "--data", path("data.mpfd"), "--manifest", path("m.json")}), 0) << err_.str();
  const auto data_report = nlohmann::json::parse(out_.str());
  EXPECT_GT(data_report.at("data").at("mpf_full_neighbor").get<double>(),
            data_report.at("data").at("mpf_strict").get<double>());
}

TEST_F(CliTest, OracleFixtures) {
  const std::string fixtures = MPF_FIXTURE_DIR;
  EXPECT_EQ(call({"oracle", fixtures + "/ising_d3.json", "-o", path("r.json")}), mpf::cli::kExitOk) << err_.str();
  const auto report = nlohmann::json::parse(slurp(path("r.json")));
  EXPECT_TRUE(report.at("passed").get<bool>());
  EXPECT_LE(std::abs(report.at("K_sparse").get<double>() - 3.485253572650748), 1e-12 * 3.485253572650748);
  EXPECT_EQ(call({"oracle", fixtures + "/ising_d3_all_states_strict.json", "--manifest", path("m1.json")}), mpf::cli::kExitOk) << out_.str();
  EXPECT_EQ(call({"oracle", fixtures + "/ising_d3_corrupted_gamma.json", "--manifest", path("m2.json")}), mpf::cli::kExitOracleFailed);
  const auto failed = nlohmann::json::parse(out_.str());
  EXPECT_FALSE(failed.at("checks").at("detailed_balance").get<bool>());
  EXPECT_TRUE(failed.at("checks").at("K_equivalence").get<bool>());
}

TEST_F(CliTest, BenchWritesPhaseTimings) {
  ASSERT_EQ(call({"bench", "--d", "6", "-n", "500", "--threads", "1", "-o", path("t.csv")}), 0) << err_.str();
  const std::string csv = slurp(path("t.csv"));
  EXPECT_EQ(csv.rfind("# format_version: 1\nphase,seconds\n", 0), 0u);
  for (const char* phase : {"generate,", "fit,", "eval,", "total,"}) EXPECT_NE(csv.find(phase), std::string::npos);
}

TEST_F(CliTest, TenUnitScenarioFinishesQuickly) {
  ASSERT_EQ(call({"bench", "--d", "10", "-n", "20000", "--threads", "1", "-o", path("t.csv")}), 0) << err_.str();
  std::istringstream csv(slurp(path("t.csv")));
  std::string line;
  double total = -1.0;
  while (std::getline(csv, line)) {
    if (line.rfind("total,", 0) == 0) total = std::stod(line.substr(6));
  }
  ASSERT_GE(total, 0.0);
  EXPECT_LT(total, 5.0);
}

TEST_F(CliTest, BenchRepeatsGiveIdenticalFits) {
  ASSERT_EQ(call({"bench", "--d", "6", "-n", "1000", "--workdir", path("a"), "-o", path("a.csv")}), 0);
  ASSERT_EQ(call({"bench", "--d", "6", "-n", "1000", "--workdir", path("b"), "-o", path("b.csv")}), 0);
  EXPECT_EQ(mpf::load_model(path("a/fit.json")).params.values(), mpf::load_model(path("b/fit.json")).params.values());
}
