#include "mpf/error.hpp"
#include "mpf/model_io.hpp"
#include "mpf/models.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

using namespace mpf;
using namespace mpf::testing;

TEST(ModelIo, RoundTripIsBitIdenticalForEveryKind) {
  std::mt19937_64 rng(1);
  std::vector<ModelPtr> models = {std::make_shared<IsingModel>(5), std::make_shared<RbmMarginalModel>(6, 3),
                                  std::make_shared<PotModel>(4, 2), std::make_shared<GaussianToyModel>(1)};
  for (const auto& m : models) {
    const ParamVector theta = random_params(*m, rng, 3.0);
    const ModelWithParams back = model_from_json(model_to_json(*m, theta));
    EXPECT_EQ(back.model->kind(), m->kind());
    EXPECT_TRUE(back.params.layout() == m->layout());
    EXPECT_EQ(back.params.values(), theta.values()) << m->kind();
  }
}

TEST(ModelIo, IsingFileCarriesSymmetrizedCouplings) {
  IsingModel m(2);
  Eigen::MatrixXd J(2, 2);
  J << 1, 2, 0, 3;
  const auto j = nlohmann::json::parse(model_to_json(m, m.make_params(J)));
  EXPECT_EQ(j.at("format_version"), kModelFormatVersion);
  EXPECT_EQ(j.at("kind"), "ising");
  EXPECT_EQ(j.at("J"), nlohmann::json({1.0, 2.0, 0.0, 3.0}));
  EXPECT_EQ(j.at("J_symmetrized"), nlohmann::json({1.0, 1.0, 1.0, 3.0}));
}

TEST(ModelIo, MalformedFilesAreParseErrors) {
  EXPECT_THROW(model_from_json("{not json"), ParseError);
  EXPECT_THROW(model_from_json(R"({"kind": "ising"})"), ParseError);
  EXPECT_THROW(model_from_json(R"({"kind": "ising", "d": 2, "J": [1, 2, 3]})"), ParseError);
  EXPECT_THROW(model_from_json(R"({"kind": "boltzmann", "d": 2})"), ParseError);
  EXPECT_THROW(model_from_json(R"({"kind": "rbm_marginal", "d": 2, "W": [0, 0]})"), ParseError);
}
