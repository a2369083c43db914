#include "mpf/sampler.hpp"

#include "mpf/error.hpp"

#include <cmath>

namespace mpf {

namespace {

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double bernoulli(double p, Rng& rng) { return uniform(rng) < p ? 1.0 : 0.0; }

}  // namespace

void SamplerConfig::validate() const {
  if (n_samples == 0) throw InvalidArgument("n_samples must be positive");
  if (thin && *thin == 0) throw InvalidArgument("thin must be at least 1");
}

BinaryDataset gibbs_sample_ising(const IsingModel& model, const ParamVector& theta, const SamplerConfig& cfg) {
  cfg.validate();
  if (!(theta.layout() == model.layout())) throw InvalidArgument("parameter layout does not match model");
  const std::size_t d = model.dim();
  const auto n = static_cast<Eigen::Index>(d);
  const Eigen::MatrixXd J = theta.block("J");
  Eigen::MatrixXd A = J + J.transpose();
  A.diagonal().setZero();
  const Eigen::VectorXd bias = J.diagonal();

  Rng rng(cfg.seed);
  Eigen::VectorXd x(n);
  for (Eigen::Index k = 0; k < n; ++k) x[k] = bernoulli(0.5, rng);

  auto sweep = [&] {
    for (Eigen::Index k = 0; k < n; ++k) {
      // E(x_k = 1) − E(x_k = 0) given the other sites.
      const double delta = bias[k] + A.col(k).dot(x);
      x[k] = bernoulli(sigmoid(-delta), rng);
    }
  };

  for (std::size_t s = 0; s < cfg.resolved_burn_in(d); ++s) sweep();
  const std::size_t thin = cfg.resolved_thin(d);
  std::vector<std::uint8_t> bits;
  bits.reserve(cfg.n_samples * d);
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    for (std::size_t s = 0; s < thin; ++s) sweep();
    for (Eigen::Index k = 0; k < n; ++k) bits.push_back(static_cast<std::uint8_t>(x[k]));
  }
  return BinaryDataset(d, std::move(bits));
}

ModelWithParams random_coupling(std::size_t d, double variance, std::uint64_t seed) {
  if (!(variance >= 0.0) || !std::isfinite(variance)) throw InvalidArgument("variance must be finite and >= 0");
  auto model = std::make_shared<IsingModel>(d);
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  if (variance > 0.0) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(variance));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) J(i, j) = normal(rng);
    }
  }
  ParamVector theta = model->make_params(J);
  return {std::move(model), std::move(theta)};
}

Eigen::VectorXd rbm_gibbs_step(const RbmMarginalModel& model, const ParamVector& theta, StateRef x, Rng& rng) {
  if (static_cast<std::size_t>(x.size()) != model.dim()) throw InvalidArgument("state dimension mismatch");
  const auto W = theta.block("W");
  const Eigen::VectorXd a = W.transpose() * x;
  Eigen::VectorXd h(a.size());
  for (Eigen::Index j = 0; j < a.size(); ++j) h[j] = bernoulli(sigmoid(-a[j]), rng);
  const Eigen::VectorXd b = W * h;
  Eigen::VectorXd out(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) out[i] = bernoulli(sigmoid(-b[i]), rng);
  return out;
}

BinaryDataset gibbs_sample_rbm(const RbmMarginalModel& model, const ParamVector& theta, const SamplerConfig& cfg) {
  cfg.validate();
  if (!(theta.layout() == model.layout())) throw InvalidArgument("parameter layout does not match model");
  const std::size_t d = model.dim();
  Rng rng(cfg.seed);
  Eigen::VectorXd x(static_cast<Eigen::Index>(d));
  for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = bernoulli(0.5, rng);

  for (std::size_t s = 0; s < cfg.resolved_burn_in(d); ++s) x = rbm_gibbs_step(model, theta, x, rng);
  const std::size_t thin = cfg.resolved_thin(d);
  std::vector<std::uint8_t> bits;
  bits.reserve(cfg.n_samples * d);
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    for (std::size_t s = 0; s < thin; ++s) x = rbm_gibbs_step(model, theta, x, rng);
    for (Eigen::Index k = 0; k < x.size(); ++k) bits.push_back(static_cast<std::uint8_t>(x[k]));
  }
  return BinaryDataset(d, std::move(bits));
}

ParamVector cd1_gradient(const RbmMarginalModel& model, const ParamVector& theta, const BinaryDataset& batch,
                         Rng& rng) {
  if (batch.dim() != model.dim()) throw InvalidArgument("batch dimension does not match model");
  if (batch.size() == 0) throw InvalidArgument("batch is empty");
  ParamVector grad = theta.zeros_like();
  const double w = 1.0 / static_cast<double>(batch.size());
  for (std::size_t n = 0; n < batch.size(); ++n) {
    const Eigen::VectorXd x = batch.state(n).as_vector();
    const Eigen::VectorXd y = rbm_gibbs_step(model, theta, x, rng);
    model.accumulate_param_gradient(x, theta, w, grad.values());
    model.accumulate_param_gradient(y, theta, -w, grad.values());
  }
  return grad;
}

}  // namespace mpf
