#include "mpf/discrete_mpf.hpp"
#include "mpf/error.hpp"
#include "mpf/models.hpp"
#include "mpf/oracle.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mpf;
using namespace mpf::testing;
namespace o = mpf::oracle;

namespace {

o::DistributionVector point_mass(std::size_t d, Eigen::Index state) {
  o::DistributionVector p{d, Eigen::VectorXd::Zero(Eigen::Index{1} << d)};
  p.probs[state] = 1.0;
  return p;
}

}  // namespace

TEST(Oracle, SingleUnitPartitionFunction) {
  IsingModel m(1);
  Eigen::MatrixXd J(1, 1);
  J << std::log(2.0);
  const ParamVector theta = m.make_params(J);
  EXPECT_NEAR(o::exact_partition(m, theta), 1.5, 1e-15);
  const auto p = o::exact_model_distribution(m, theta);
  EXPECT_NEAR(p.probs[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p.probs[1], 1.0 / 3.0, 1e-15);
}

TEST(Oracle, FixturePartitionMatchesIndependentSum) {
  IsingModel m(3);
  const ParamVector theta = m.make_params(fixture_coupling());
  // Frozen from an independent enumeration.
  EXPECT_LE(relative_error(o::exact_partition(m, theta), 8.342154897918224), 1e-14);
}

TEST(Oracle, TransitionMatrixStructure) {
  IsingModel m(2);
  Eigen::MatrixXd J(2, 2);
  J << 1.0, 0.0, 0.0, 0.0;
  const auto g = o::build_transition_matrix(m, m.make_params(J));
  // Only states 0 <-> 1 differ in energy; bit-flip pairs 0-1, 0-2, 1-3, 2-3.
  EXPECT_NEAR(g.entries(1, 0), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(g.entries(0, 1), std::exp(0.5), 1e-15);
  EXPECT_EQ(g.entries(3, 0), 0.0);
  EXPECT_EQ(g.connectivity(3, 0), 0.0);
  EXPECT_LE(o::max_column_sum(g), 1e-15);
  const auto all = o::build_transition_matrix(m, m.make_params(J), o::Connectivity::all_pairs);
  EXPECT_GT(all.entries(3, 0), 0.0);
}

TEST(Oracle, DetailedBalanceAndColumnSumsOnRandomModels) {
  std::mt19937_64 rng(1);
  for (std::size_t d : {2u, 4u, 6u}) {
    std::vector<ModelPtr> models = {std::make_shared<IsingModel>(d), std::make_shared<RbmMarginalModel>(d, 2)};
    for (const auto& m : models) {
      const ParamVector theta = random_params(*m, rng);
      for (auto c : {o::Connectivity::bit_flip, o::Connectivity::all_pairs}) {
        const auto g = o::build_transition_matrix(*m, theta, c);
        EXPECT_LE(o::max_column_sum(g), 1e-12);
        EXPECT_LE(o::check_detailed_balance(g, o::exact_model_distribution(*m, theta)), 1e-12);
      }
    }
  }
}

TEST(Oracle, CorruptedRateBreaksDetailedBalance) {
  IsingModel m(3);
  const ParamVector theta = m.make_params(fixture_coupling());
  auto g = o::build_transition_matrix(m, theta);
  g.entries(1, 0) += 0.1;
  EXPECT_GT(o::check_detailed_balance(g, o::exact_model_distribution(m, theta)), 1e-3);
  EXPECT_GT(o::max_column_sum(g), 1e-3);
}

TEST(Oracle, EvolutionConservesMassAndReachesEquilibrium) {
  IsingModel m(3);
  const ParamVector theta = m.make_params(fixture_coupling());
  const auto g = o::build_transition_matrix(m, theta);
  const auto target = o::exact_model_distribution(m, theta);
  const auto p0 = point_mass(3, 5);
  EXPECT_EQ(o::evolve(p0, g, 0.0).probs, p0.probs);
  double previous = o::l1_distance(p0, target);
  for (double t : {0.5, 2.0, 8.0, 50.0}) {
    const auto p = o::evolve(p0, g, t);
    EXPECT_NEAR(p.probs.sum(), 1.0, 1e-12);
    EXPECT_GE(p.probs.minCoeff(), -1e-12);
    const double dist = o::l1_distance(p, target);
    EXPECT_LT(dist, previous);
    previous = dist;
  }
  EXPECT_LE(previous, 1e-8);
  EXPECT_LE(o::l1_distance(o::evolve(target, g, 3.0), target), 1e-12);
}

TEST(Oracle, KlExamples) {
  o::DistributionVector p{1, Eigen::Vector2d(1.0, 0.0)};
  o::DistributionVector q{1, Eigen::Vector2d(0.5, 0.5)};
  EXPECT_NEAR(o::exact_kl(p, q), std::log(2.0), 1e-15);
  EXPECT_EQ(o::exact_kl(q, q), 0.0);
  EXPECT_THROW(o::exact_kl(q, p), InvalidArgument);
  EXPECT_NEAR(o::l1_distance(p, q), 1.0, 1e-15);
}

TEST(Oracle, EmpiricalDistributionCountsStates) {
  const BinaryDataset data({BinaryState{1, 0}, BinaryState{1, 0}, BinaryState{0, 1}, BinaryState{1, 1}});
  const auto p = o::empirical_distribution(data);
  EXPECT_EQ(p.probs, Eigen::Vector4d(0.0, 0.5, 0.25, 0.25));
}

TEST(Oracle, TaylorSlopeMatchesStrictObjective) {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 5; ++rep) {
    IsingModel m(4);
    const ParamVector theta = random_params(m, rng);
    const BinaryDataset data = random_binary_dataset(4, 5, rng);
    const auto t = o::taylor_check(m, data, theta);
    FitConfig strict;
    strict.mode = FlowMode::strict;
    const double k = mpf_objective(m, data, theta, strict).value;
    EXPECT_LE(relative_error(t.strict_K, k), 1e-12);
    EXPECT_LE(t.relative_error, 1e-2);
    EXPECT_LE(relative_error(t.slope_at_zero, k), 1e-2);
  }
}

TEST(Oracle, HessianOfIsingObjectiveIsPositiveSemidefinite) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    IsingModel m(4);
    const ParamVector theta = random_params(m, rng);
    const BinaryDataset data = random_binary_dataset(4, 10, rng);
    const Eigen::MatrixXd h = o::numerical_hessian_of_K(m, data, theta);
    EXPECT_LE((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GE(o::min_eigenvalue(h), -1e-6);
  }
}

TEST(Oracle, NegativeLogLikelihoodGradient) {
  std::mt19937_64 rng(4);
  RbmMarginalModel m(5, 2);
  const ParamVector theta = random_params(m, rng);
  const BinaryDataset data = random_binary_dataset(5, 20, rng);
  const auto r = o::exact_negative_log_likelihood(m, data, theta);
  const auto f = [&](const Eigen::VectorXd& v) {
    return o::exact_negative_log_likelihood(m, data, ParamVector(m.layout(), v)).value;
  };
  EXPECT_LE(relative_error(r.gradient.values(), finite_difference(f, theta.values())), 1e-7);
  const auto p = o::empirical_distribution(data);
  const auto q = o::exact_model_distribution(m, theta);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < p.probs.size(); ++i) {
    if (p.probs[i] > 0) entropy -= p.probs[i] * std::log(p.probs[i]);
  }
  EXPECT_NEAR(r.value, entropy + o::exact_kl(p, q), 1e-12);
}

TEST(Oracle, RejectsOversizedModels) {
  IsingModel m(o::kMaxTransitionBits + 1);
  EXPECT_THROW(o::build_transition_matrix(m, ParamVector(m.layout())), CapacityError);
}
