#include "mpf/model.hpp"

#include "mpf/error.hpp"

#include <string>

namespace mpf {

void EnergyModel::check_state(StateRef x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    throw InvalidArgument(kind() + ": state dimension " + std::to_string(x.size()) +
                          " does not match model dimension " + std::to_string(dim()));
  }
}

void EnergyModel::check_params(const ParamVector& theta) const {
  if (theta.size() != layout().total_size() || !(theta.layout() == layout())) {
    throw InvalidArgument(kind() + ": parameter vector of length " + std::to_string(theta.size()) +
                          " does not match model layout of length " +
                          std::to_string(layout().total_size()));
  }
}

void EnergyModel::check_discrete(StateRef x, std::size_t k) const {
  if (!is_discrete()) throw UnsupportedCapability(kind() + ": bit-flip operations need a discrete model");
  check_state(x);
  if (k >= dim()) {
    throw InvalidArgument(kind() + ": bit index " + std::to_string(k) + " out of range for d=" +
                          std::to_string(dim()));
  }
}

double EnergyModel::energy(StateRef x, const ParamVector& theta) const {
  check_state(x);
  check_params(theta);
  return do_energy(x, theta);
}

double EnergyModel::energy(const BinaryState& x, const ParamVector& theta) const {
  return energy(x.as_vector(), theta);
}

ParamVector EnergyModel::param_gradient_of_energy(StateRef x, const ParamVector& theta) const {
  ParamVector g = theta.zeros_like();
  accumulate_param_gradient(x, theta, 1.0, g.values());
  return g;
}

ParamVector EnergyModel::param_gradient_of_energy(const BinaryState& x, const ParamVector& theta) const {
  return param_gradient_of_energy(x.as_vector(), theta);
}

void EnergyModel::accumulate_param_gradient(StateRef x, const ParamVector& theta, double scale,
                                            GradRef grad) const {
  check_state(x);
  check_params(theta);
  do_accumulate_param_gradient(x, theta, scale, grad);
}

double EnergyModel::energy_diff(const BinaryState& x, std::size_t k, const ParamVector& theta) const {
  return energy_diff(x.as_vector(), k, theta);
}

double EnergyModel::energy_diff(StateRef x, std::size_t k, const ParamVector& theta) const {
  check_discrete(x, k);
  check_params(theta);
  return do_energy_diff(x, k, theta);
}

ParamVector EnergyModel::param_gradient_of_energy_diff(const BinaryState& x, std::size_t k,
                                                       const ParamVector& theta) const {
  const Eigen::VectorXd v = x.as_vector();
  check_discrete(v, k);
  check_params(theta);
  ParamVector g = theta.zeros_like();
  do_accumulate_energy_diff_gradient(v, k, theta, 1.0, g.values());
  return g;
}

void EnergyModel::flip_energy_diffs(const Eigen::MatrixXd& states, const ParamVector& theta,
                                    Eigen::MatrixXd& delta) const {
  if (!is_discrete()) throw UnsupportedCapability(kind() + ": bit-flip operations need a discrete model");
  if (static_cast<std::size_t>(states.cols()) != dim()) {
    throw InvalidArgument(kind() + ": state dimension does not match model dimension");
  }
  check_params(theta);
  delta.resize(states.rows(), states.cols());
  do_flip_energy_diffs(states, theta, delta);
}

void EnergyModel::accumulate_flip_gradient(const Eigen::MatrixXd& states, const Eigen::MatrixXd& coeff,
                                           const ParamVector& theta, GradRef grad) const {
  if (!is_discrete()) throw UnsupportedCapability(kind() + ": bit-flip operations need a discrete model");
  if (static_cast<std::size_t>(states.cols()) != dim() || coeff.rows() != states.rows() ||
      coeff.cols() != states.cols()) {
    throw InvalidArgument(kind() + ": flip-gradient coefficient shape mismatch");
  }
  check_params(theta);
  do_accumulate_flip_gradient(states, coeff, theta, grad);
}

Eigen::VectorXd EnergyModel::state_gradient(StateRef x, const ParamVector& theta) const {
  check_state(x);
  check_params(theta);
  return do_state_gradient(x, theta);
}

double EnergyModel::state_laplacian(StateRef x, const ParamVector& theta) const {
  check_state(x);
  check_params(theta);
  return do_state_laplacian(x, theta);
}

double EnergyModel::score_matching_term(StateRef x, const ParamVector& theta, double scale,
                                        GradRef grad) const {
  check_state(x);
  check_params(theta);
  return do_score_matching_term(x, theta, scale, grad);
}

// Generic fallbacks.

double EnergyModel::do_energy_diff(StateRef x, std::size_t k, const ParamVector& theta) const {
  Eigen::VectorXd y = x;
  y[static_cast<Eigen::Index>(k)] = 1.0 - y[static_cast<Eigen::Index>(k)];
  return do_energy(y, theta) - do_energy(x, theta);
}

void EnergyModel::do_accumulate_energy_diff_gradient(StateRef x, std::size_t k, const ParamVector& theta,
                                                     double scale, GradRef grad) const {
  Eigen::VectorXd y = x;
  y[static_cast<Eigen::Index>(k)] = 1.0 - y[static_cast<Eigen::Index>(k)];
  do_accumulate_param_gradient(y, theta, scale, grad);
  do_accumulate_param_gradient(x, theta, -scale, grad);
}

void EnergyModel::do_flip_energy_diffs(const Eigen::MatrixXd& states, const ParamVector& theta,
                                       Eigen::MatrixXd& delta) const {
  for (Eigen::Index r = 0; r < states.rows(); ++r) {
    const Eigen::VectorXd x = states.row(r).transpose();
    for (Eigen::Index k = 0; k < states.cols(); ++k) {
      delta(r, k) = do_energy_diff(x, static_cast<std::size_t>(k), theta);
    }
  }
}

void EnergyModel::do_accumulate_flip_gradient(const Eigen::MatrixXd& states, const Eigen::MatrixXd& coeff,
                                              const ParamVector& theta, GradRef grad) const {
  for (Eigen::Index r = 0; r < states.rows(); ++r) {
    const Eigen::VectorXd x = states.row(r).transpose();
    for (Eigen::Index k = 0; k < states.cols(); ++k) {
      const double c = coeff(r, k);
      if (c != 0.0) do_accumulate_energy_diff_gradient(x, static_cast<std::size_t>(k), theta, c, grad);
    }
  }
}

Eigen::VectorXd EnergyModel::do_state_gradient(StateRef, const ParamVector&) const {
  throw UnsupportedCapability(kind() + ": model does not provide state derivatives");
}

double EnergyModel::do_state_laplacian(StateRef, const ParamVector&) const {
  throw UnsupportedCapability(kind() + ": model does not provide state derivatives");
}

double EnergyModel::do_score_matching_term(StateRef, const ParamVector&, double, GradRef) const {
  throw UnsupportedCapability(kind() + ": model does not provide state derivatives");
}

}  // namespace mpf
