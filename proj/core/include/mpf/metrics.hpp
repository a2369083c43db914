#pragma once

#include "mpf/dataset.hpp"
#include "mpf/models.hpp"
#include "mpf/sampler.hpp"

#include <Eigen/Core>

namespace mpf {

/// First and second moments of a distribution over {0,1}^d.
struct Moments {
  Eigen::VectorXd mean;
  /// ⟨x_i x_j⟩; the diagonal equals the mean.
  Eigen::MatrixXd second;
  /// ⟨x_i x_j⟩ − ⟨x_i⟩⟨x_j⟩.
  Eigen::MatrixXd covariance;
  /// Monte-Carlo standard error of each second-moment entry; zero when exact.
  Eigen::MatrixXd standard_error;
  bool exact = false;
};

/// Exact moments by enumerating all 2^d states (d <= 20).
Moments exact_moments(const EnergyModel& model, const ParamVector& theta);

/// Sample moments of a dataset, with i.i.d. standard errors.
Moments sample_moments(const BinaryDataset& data);

/// Exact moments for an Ising model up to `max_exact_bits`, Gibbs estimates
/// from `cfg` beyond that.
Moments ising_moments(const IsingModel& model, const ParamVector& theta, const SamplerConfig& cfg,
                      std::size_t max_exact_bits = 16);

/// Mean absolute difference, optionally skipping the diagonal.
double mean_absolute_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, bool include_diagonal);

/// Every labelled MAE variant between two moment sets.
struct CorrelationErrors {
  double second_moment_offdiag = 0.0;
  double second_moment_full = 0.0;
  double covariance_offdiag = 0.0;
  double covariance_full = 0.0;
};

CorrelationErrors correlation_errors(const Moments& fitted, const Moments& truth);

/// MAE between (J + Jᵀ)/2 of the two coupling matrices, all entries.
double coupling_error(const Eigen::MatrixXd& J_fit, const Eigen::MatrixXd& J_true);

}  // namespace mpf
