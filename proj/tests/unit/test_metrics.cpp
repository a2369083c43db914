#include "mpf/error.hpp"
#include "mpf/metrics.hpp"
#include "mpf/models.hpp"
#include "mpf/trace_io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <sstream>

using namespace mpf;
using namespace mpf::testing;

TEST(Moments, ExactMomentsOfIndependentUnits) {
  IsingModel m(3);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3, 3);
  J(1, 1) = std::log(2.0);
  const Moments mm = exact_moments(m, m.make_params(J));
  EXPECT_TRUE(mm.exact);
  EXPECT_NEAR(mm.mean[0], 0.5, 1e-15);
  EXPECT_NEAR(mm.mean[1], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(mm.second(0, 1), 0.5 / 3.0, 1e-15);
  EXPECT_NEAR(mm.covariance(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(mm.covariance(1, 1), 2.0 / 9.0, 1e-15);
  EXPECT_EQ(mm.standard_error.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Moments, SampleMomentsAndErrors) {
  const BinaryDataset data({BinaryState{1, 1}, BinaryState{1, 0}, BinaryState{0, 0}, BinaryState{1, 1}});
  const Moments mm = sample_moments(data);
  EXPECT_FALSE(mm.exact);
  EXPECT_EQ(mm.mean, Eigen::Vector2d(0.75, 0.5));
  EXPECT_EQ(mm.second(0, 1), 0.5);
  EXPECT_EQ(mm.second(1, 1), 0.5);
  EXPECT_NEAR(mm.covariance(0, 1), 0.5 - 0.375, 1e-15);
  EXPECT_NEAR(mm.standard_error(0, 1), std::sqrt(0.25 / 4), 1e-15);
}

TEST(Moments, IsingSwitchesToSamplingAboveLimit) {
  IsingModel m(4);
  SamplerConfig cfg;
  cfg.n_samples = 100;
  EXPECT_TRUE(ising_moments(m, ParamVector(m.layout()), cfg, 4).exact);
  EXPECT_FALSE(ising_moments(m, ParamVector(m.layout()), cfg, 3).exact);
}

TEST(Errors, MeanAbsoluteErrorVariants) {
  Eigen::Matrix2d a;
  a << 1, 2, 3, 4;
  Eigen::Matrix2d b;
  b << 1, 0, 0, 0;
  EXPECT_EQ(mean_absolute_error(a, b, true), 9.0 / 4.0);
  EXPECT_EQ(mean_absolute_error(a, b, false), 5.0 / 2.0);
  EXPECT_THROW(mean_absolute_error(a, Eigen::Matrix3d::Zero(), true), InvalidArgument);
}

TEST(Errors, CouplingErrorUsesSymmetrizedMatrices) {
  Eigen::Matrix2d a;
  a << 0, 2, 0, 0;
  Eigen::Matrix2d b;
  b << 0, 1, 1, 0;
  EXPECT_EQ(coupling_error(a, b), 0.0);
}

TEST(Errors, IdenticalMomentsGiveZero) {
  std::mt19937_64 rng(1);
  IsingModel m(4);
  const Moments mm = exact_moments(m, random_params(m, rng));
  const CorrelationErrors e = correlation_errors(mm, mm);
  EXPECT_EQ(e.second_moment_offdiag, 0.0);
  EXPECT_EQ(e.covariance_full, 0.0);
}

TEST(TraceIo, CsvAndJsonlLayout) {
  FitTrace trace;
  trace.records = {{0, 2.5, 1.0, 0.0, 0.0}, {1, 0.125, 1e-9, 0.5, 3.25}};
  trace.reason = Termination::gradient_tolerance;
  std::istringstream csv(trace_to_csv(trace));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "# format_version: 1");
  std::getline(csv, line);
  EXPECT_EQ(line, "iter,value,grad_norm,elapsed_ms");
  std::getline(csv, line);
  EXPECT_EQ(line.substr(0, 4), "0,2.");
  std::vector<nlohmann::json> lines;
  std::istringstream jsonl(trace_to_jsonl(trace));
  while (std::getline(jsonl, line)) lines.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[1].at("iter"), 1);
  EXPECT_EQ(lines[1].at("value").get<double>(), 0.125);
  EXPECT_EQ(lines[2].at("termination"), "gradient-tolerance");
  EXPECT_EQ(lines[2].at("format_version"), kTraceFormatVersion);
}
