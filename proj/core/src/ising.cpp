#include "mpf/error.hpp"
#include "mpf/models.hpp"

namespace mpf {

IsingModel::IsingModel(std::size_t d) : d_(d) {
  if (d == 0) throw InvalidArgument("ising: d must be positive");
  layout_.add("J", d, d);
}

ParamVector IsingModel::make_params(const Eigen::MatrixXd& J) const {
  if (static_cast<std::size_t>(J.rows()) != d_ || static_cast<std::size_t>(J.cols()) != d_) {
    throw InvalidArgument("ising: J must be d x d");
  }
  ParamVector theta(layout_);
  theta.block("J") = J;
  return theta;
}

Eigen::MatrixXd IsingModel::symmetrized(const Eigen::MatrixXd& J) { return 0.5 * (J + J.transpose()); }

double IsingModel::do_energy(StateRef x, const ParamVector& theta) const {
  const auto J = theta.block("J");
  double e = 0.0;
  for (Eigen::Index a = 0; a < J.rows(); ++a) {
    if (x[a] == 0.0) continue;
    for (Eigen::Index b = 0; b < J.cols(); ++b) {
      e += (a == b) ? J(a, a) * x[a] : J(a, b) * x[a] * x[b];
    }
  }
  return e;
}

void IsingModel::do_accumulate_param_gradient(StateRef x, const ParamVector& theta, double scale,
                                              GradRef grad) const {
  const auto n = static_cast<Eigen::Index>(d_);
  const auto offset = static_cast<Eigen::Index>(theta.layout().segment("J").offset);
  MatrixMap G(grad.data() + offset, n, n);
  G.noalias() += scale * (x * x.transpose());
  for (Eigen::Index a = 0; a < n; ++a) G(a, a) += scale * (x[a] - x[a] * x[a]);
}

double IsingModel::do_energy_diff(StateRef x, std::size_t k, const ParamVector& theta) const {
  const auto J = theta.block("J");
  const auto kk = static_cast<Eigen::Index>(k);
  double field = J(kk, kk);
  for (Eigen::Index i = 0; i < J.rows(); ++i) {
    if (i != kk) field += (J(kk, i) + J(i, kk)) * x[i];
  }
  return (1.0 - 2.0 * x[kk]) * field;
}

void IsingModel::do_accumulate_energy_diff_gradient(StateRef x, std::size_t k, const ParamVector& theta,
                                                    double scale, GradRef grad) const {
  const auto n = static_cast<Eigen::Index>(d_);
  const auto kk = static_cast<Eigen::Index>(k);
  const auto offset = static_cast<Eigen::Index>(theta.layout().segment("J").offset);
  MatrixMap G(grad.data() + offset, n, n);
  const double s = scale * (1.0 - 2.0 * x[kk]);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == kk) continue;
    G(kk, i) += s * x[i];
    G(i, kk) += s * x[i];
  }
  G(kk, kk) += s;
}

void IsingModel::do_flip_energy_diffs(const Eigen::MatrixXd& states, const ParamVector& theta,
                                      Eigen::MatrixXd& delta) const {
  const Eigen::MatrixXd J = theta.block("J");
  Eigen::MatrixXd coupling = J + J.transpose();
  coupling.diagonal().setZero();
  // Local field seen by bit k; flipping k changes the energy by (1 - 2 x_k) * field_k.
  delta.noalias() = states * coupling;
  delta.rowwise() += J.diagonal().transpose();
  delta.array() *= (1.0 - 2.0 * states.array());
}

void IsingModel::do_accumulate_flip_gradient(const Eigen::MatrixXd& states, const Eigen::MatrixXd& coeff,
                                             const ParamVector& theta, GradRef grad) const {
  const auto n = static_cast<Eigen::Index>(d_);
  const auto offset = static_cast<Eigen::Index>(theta.layout().segment("J").offset);
  const Eigen::MatrixXd signed_coeff = (coeff.array() * (1.0 - 2.0 * states.array())).matrix();
  Eigen::MatrixXd G = signed_coeff.transpose() * states;
  G += G.transpose().eval();
  G.diagonal() = signed_coeff.colwise().sum().transpose();
  MatrixMap(grad.data() + offset, n, n) += G;
}

}  // namespace mpf
