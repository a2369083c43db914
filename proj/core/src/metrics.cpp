#include "mpf/metrics.hpp"

#include "mpf/error.hpp"
#include "mpf/oracle.hpp"

#include <cmath>

namespace mpf {

namespace {

Moments finish(Eigen::VectorXd mean, Eigen::MatrixXd second) {
  Moments m;
  m.covariance = second - mean * mean.transpose();
  m.mean = std::move(mean);
  m.second = std::move(second);
  m.standard_error = Eigen::MatrixXd::Zero(m.second.rows(), m.second.cols());
  return m;
}

}  // namespace

Moments exact_moments(const EnergyModel& model, const ParamVector& theta) {
  const oracle::DistributionVector p = oracle::exact_model_distribution(model, theta);
  const auto d = static_cast<Eigen::Index>(model.dim());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd x(d);
  for (Eigen::Index s = 0; s < p.probs.size(); ++s) {
    for (Eigen::Index k = 0; k < d; ++k) x[k] = static_cast<double>((s >> k) & 1);
    mean += p.probs[s] * x;
    second.noalias() += p.probs[s] * (x * x.transpose());
  }
  Moments m = finish(std::move(mean), std::move(second));
  m.exact = true;
  return m;
}

Moments sample_moments(const BinaryDataset& data) {
  if (data.size() == 0) throw InvalidArgument("moments of an empty dataset");
  const auto& rows = data.distinct_rows();
  const auto& counts = data.distinct_counts();
  const double n = static_cast<double>(data.size());
  const Eigen::VectorXd mean = rows.transpose() * counts / n;
  const Eigen::MatrixXd second = rows.transpose() * counts.asDiagonal() * rows / n;
  Moments m = finish(mean, second);
  // x_i x_j is Bernoulli with success probability second(i, j).
  m.standard_error = (second.array() * (1.0 - second.array()) / n).sqrt().matrix();
  return m;
}

Moments ising_moments(const IsingModel& model, const ParamVector& theta, const SamplerConfig& cfg,
                      std::size_t max_exact_bits) {
  if (model.dim() <= max_exact_bits) return exact_moments(model, theta);
  return sample_moments(gibbs_sample_ising(model, theta, cfg));
}

double mean_absolute_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, bool include_diagonal) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("matrix shapes differ");
  double total = 0.0;
  double count = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i == j && !include_diagonal) continue;
      total += std::abs(a(i, j) - b(i, j));
      count += 1.0;
    }
  }
  return count > 0.0 ? total / count : 0.0;
}

CorrelationErrors correlation_errors(const Moments& fitted, const Moments& truth) {
  return {mean_absolute_error(fitted.second, truth.second, false),
          mean_absolute_error(fitted.second, truth.second, true),
          mean_absolute_error(fitted.covariance, truth.covariance, false),
          mean_absolute_error(fitted.covariance, truth.covariance, true)};
}

double coupling_error(const Eigen::MatrixXd& J_fit, const Eigen::MatrixXd& J_true) {
  return mean_absolute_error(IsingModel::symmetrized(J_fit), IsingModel::symmetrized(J_true), true);
}

}  // namespace mpf
