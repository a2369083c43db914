#include "mpf/error.hpp"
#include "mpf/models.hpp"

namespace mpf {

namespace {

// Hidden-unit contribution to the marginal energy for pre-activations a.
double hidden_energy(const Eigen::VectorXd& a) {
  double e = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) e -= softplus(-a[j]);
  return e;
}

// dE/da_j = sigmoid(-a_j)
Eigen::VectorXd hidden_drive(const Eigen::VectorXd& a) {
  Eigen::VectorXd out(a.size());
  for (Eigen::Index j = 0; j < a.size(); ++j) out[j] = sigmoid(-a[j]);
  return out;
}

}  // namespace

RbmMarginalModel::RbmMarginalModel(std::size_t d_vis, std::size_t d_hid) : d_vis_(d_vis), d_hid_(d_hid) {
  if (d_vis == 0 || d_hid == 0) throw InvalidArgument("rbm_marginal: dimensions must be positive");
  layout_.add("W", d_vis, d_hid);
}

ParamVector RbmMarginalModel::make_params(const Eigen::MatrixXd& W) const {
  if (static_cast<std::size_t>(W.rows()) != d_vis_ || static_cast<std::size_t>(W.cols()) != d_hid_) {
    throw InvalidArgument("rbm_marginal: W must be d_vis x d_hid");
  }
  ParamVector theta(layout_);
  theta.block("W") = W;
  return theta;
}

double RbmMarginalModel::do_energy(StateRef x, const ParamVector& theta) const {
  const auto W = theta.block("W");
  const Eigen::VectorXd a = W.transpose() * x;
  return hidden_energy(a);
}

void RbmMarginalModel::do_accumulate_param_gradient(StateRef x, const ParamVector& theta, double scale,
                                                    GradRef grad) const {
  const auto W = theta.block("W");
  const Eigen::VectorXd a = W.transpose() * x;
  const auto offset = static_cast<Eigen::Index>(theta.layout().segment("W").offset);
  MatrixMap G(grad.data() + offset, W.rows(), W.cols());
  G.noalias() += scale * (x * hidden_drive(a).transpose());
}

double RbmMarginalModel::do_energy_diff(StateRef x, std::size_t k, const ParamVector& theta) const {
  const auto W = theta.block("W");
  const auto kk = static_cast<Eigen::Index>(k);
  const Eigen::VectorXd a = W.transpose() * x;
  const Eigen::VectorXd a_flip = a + (1.0 - 2.0 * x[kk]) * W.row(kk).transpose();
  return hidden_energy(a_flip) - hidden_energy(a);
}

void RbmMarginalModel::do_accumulate_energy_diff_gradient(StateRef x, std::size_t k, const ParamVector& theta,
                                                          double scale, GradRef grad) const {
  const auto W = theta.block("W");
  const auto kk = static_cast<Eigen::Index>(k);
  const double s = 1.0 - 2.0 * x[kk];
  const Eigen::VectorXd a = W.transpose() * x;
  const Eigen::VectorXd a_flip = a + s * W.row(kk).transpose();
  Eigen::VectorXd y = x;
  y[kk] += s;
  const auto offset = static_cast<Eigen::Index>(theta.layout().segment("W").offset);
  MatrixMap G(grad.data() + offset, W.rows(), W.cols());
  G.noalias() += scale * (y * hidden_drive(a_flip).transpose());
  G.noalias() -= scale * (x * hidden_drive(a).transpose());
}

void RbmMarginalModel::do_flip_energy_diffs(const Eigen::MatrixXd& states, const ParamVector& theta,
                                            Eigen::MatrixXd& delta) const {
  const Eigen::MatrixXd W = theta.block("W");
  const Eigen::MatrixXd pre = states * W;  // rows x d_hid
  for (Eigen::Index r = 0; r < states.rows(); ++r) {
    const Eigen::VectorXd a = pre.row(r).transpose();
    const double base = hidden_energy(a);
    for (Eigen::Index k = 0; k < states.cols(); ++k) {
      const double s = 1.0 - 2.0 * states(r, k);
      delta(r, k) = hidden_energy(a + s * W.row(k).transpose()) - base;
    }
  }
}

void RbmMarginalModel::do_accumulate_flip_gradient(const Eigen::MatrixXd& states, const Eigen::MatrixXd& coeff,
                                                   const ParamVector& theta, GradRef grad) const {
  const Eigen::MatrixXd W = theta.block("W");
  const Eigen::MatrixXd pre = states * W;
  const auto offset = static_cast<Eigen::Index>(theta.layout().segment("W").offset);
  MatrixMap G(grad.data() + offset, W.rows(), W.cols());
  for (Eigen::Index r = 0; r < states.rows(); ++r) {
    const Eigen::VectorXd x = states.row(r).transpose();
    const Eigen::VectorXd a = pre.row(r).transpose();
    // Σ_k c_k [x'ₖ σ(-a'ₖ)ᵀ - x σ(-a)ᵀ] with x'ₖ = x + s_k e_k.
    Eigen::VectorXd drive_sum = -coeff.row(r).sum() * hidden_drive(a);
    for (Eigen::Index k = 0; k < states.cols(); ++k) {
      const double c = coeff(r, k);
      if (c == 0.0) continue;
      const double s = 1.0 - 2.0 * x[k];
      const Eigen::VectorXd drive_flip = hidden_drive(a + s * W.row(k).transpose());
      drive_sum += c * drive_flip;
      G.row(k) += (c * s) * drive_flip.transpose();
    }
    G.noalias() += x * drive_sum.transpose();
  }
}

}  // namespace mpf
