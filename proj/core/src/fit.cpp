#include "mpf/fit.hpp"

#include "mpf/error.hpp"
#include "mpf/models.hpp"
#include "mpf/oracle.hpp"
#include "mpf/score_matching.hpp"

#include <random>

namespace mpf {

namespace {

/// K is linear in ε, so the gradient test is applied to ∇K/ε. Scaling by a
/// power of two then leaves every iterate unchanged.
OptimizerConfig scaled_for_flow_time(OptimizerConfig opt, double flow_time) {
  opt.gradient_norm_tolerance *= flow_time;
  return opt;
}

}  // namespace

ParamVector default_initial_params(const EnergyModel& model, std::uint64_t seed) {
  ParamVector theta(model.layout());
  const std::string kind = model.kind();
  if (kind == "gaussian_toy") {
    theta.values().setOnes();
  } else if (kind == "rbm_marginal" || kind == "product_of_t") {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 0.01);
    const auto name = kind == "rbm_marginal" ? "W" : "J";
    auto block = theta.block(name);
    for (Eigen::Index i = 0; i < block.rows(); ++i) {
      for (Eigen::Index j = 0; j < block.cols(); ++j) block(i, j) = normal(rng);
    }
  }
  return theta;
}

MinimizeResult fit_discrete(const DiscreteMpfObjective& objective, const ParamVector& theta0,
                            const OptimizerConfig& opt) {
  ParamVector probe = theta0;
  auto fn = [&](const Eigen::VectorXd& x) {
    probe.values() = x;
    ObjectiveReport r = objective.evaluate(probe);
    return ValueAndGradient{r.value, std::move(r.gradient.values())};
  };
  return minimize(fn, theta0, scaled_for_flow_time(opt, objective.config().flow_time));
}

MinimizeResult fit_continuous(ModelPtr model, const ContinuousDataset& data, const NeighborConfig& cfg,
                              const ParamVector& theta0, const OptimizerConfig& opt, double flow_time,
                              NeighborSchedule schedule, unsigned threads) {
  ContinuousMpfObjective objective(std::move(model), data, cfg, flow_time, threads);
  const OptimizerConfig scaled = scaled_for_flow_time(opt, flow_time);
  ParamVector probe = theta0;
  auto fn = [&](const Eigen::VectorXd& x) {
    probe.values() = x;
    ObjectiveReport r = objective.evaluate(probe);
    return ValueAndGradient{r.value, std::move(r.gradient.values())};
  };
  IterationHook hook;
  if (schedule == NeighborSchedule::stochastic) {
    hook = [&](std::size_t iteration) {
      objective.resample(cfg.seed + iteration);
      return true;
    };
  }
  return minimize(fn, theta0, scaled, hook);
}

MinimizeResult fit_score_matching(const EnergyModel& model, const ContinuousDataset& data, const ParamVector& theta0,
                                  const OptimizerConfig& opt, unsigned threads) {
  if (data.size() == 0) throw InvalidArgument("dataset is empty");
  const double inv_n = 1.0 / static_cast<double>(data.size());
  ParamVector probe = theta0;
  auto fn = [&](const Eigen::VectorXd& x) {
    probe.values() = x;
    SmReport r = score_matching_objective(model, data, probe, threads);
    return ValueAndGradient{inv_n * r.value, inv_n * r.gradient.values()};
  };
  return minimize(fn, theta0, opt);
}

MinimizeResult fit_exact_ml(const EnergyModel& model, const BinaryDataset& data, const ParamVector& theta0,
                            const OptimizerConfig& opt) {
  ParamVector probe = theta0;
  auto fn = [&](const Eigen::VectorXd& x) {
    probe.values() = x;
    oracle::LikelihoodReport r = oracle::exact_negative_log_likelihood(model, data, probe);
    return ValueAndGradient{r.value, std::move(r.gradient.values())};
  };
  return minimize(fn, theta0, opt);
}

}  // namespace mpf
