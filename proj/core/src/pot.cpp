#include "mpf/error.hpp"
#include "mpf/models.hpp"

#include <cmath>
#include <vector>

namespace mpf {

namespace {

// φ(u) = log(1 + u²) and its first three derivatives.
struct StudentT {
  double value, d1, d2, d3;

  explicit StudentT(double u) {
    const double q = 1.0 + u * u;
    value = std::log1p(u * u);
    d1 = 2.0 * u / q;
    d2 = 2.0 * (1.0 - u * u) / (q * q);
    d3 = -4.0 * u * (3.0 - u * u) / (q * q * q);
  }
};

}  // namespace

PotModel::PotModel(std::size_t d, std::size_t n_filters) : d_(d), n_(n_filters) {
  if (d == 0 || n_filters == 0) throw InvalidArgument("product_of_t: dimensions must be positive");
  layout_.add("J", n_filters, d).add("log_alpha", n_filters, 1);
}

ParamVector PotModel::make_params(const Eigen::MatrixXd& filters, const Eigen::VectorXd& log_alpha) const {
  if (static_cast<std::size_t>(filters.rows()) != n_ || static_cast<std::size_t>(filters.cols()) != d_ ||
      static_cast<std::size_t>(log_alpha.size()) != n_) {
    throw InvalidArgument("product_of_t: J must be n_filters x d and log_alpha length n_filters");
  }
  ParamVector theta(layout_);
  theta.block("J") = filters;
  theta.block("log_alpha") = log_alpha;
  return theta;
}

double PotModel::do_energy(StateRef x, const ParamVector& theta) const {
  const auto J = theta.block("J");
  const auto log_alpha = theta.block("log_alpha");
  const Eigen::VectorXd u = J * x;
  double e = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) e += std::exp(log_alpha(i, 0)) * std::log1p(u[i] * u[i]);
  return e;
}

void PotModel::do_accumulate_param_gradient(StateRef x, const ParamVector& theta, double scale,
                                            GradRef grad) const {
  const auto J = theta.block("J");
  const auto log_alpha = theta.block("log_alpha");
  const auto j_off = static_cast<Eigen::Index>(theta.layout().segment("J").offset);
  const auto a_off = static_cast<Eigen::Index>(theta.layout().segment("log_alpha").offset);
  MatrixMap GJ(grad.data() + j_off, J.rows(), J.cols());
  const Eigen::VectorXd u = J * x;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double alpha = std::exp(log_alpha(i, 0));
    const StudentT phi(u[i]);
    GJ.row(i) += (scale * alpha * phi.d1) * x.transpose();
    grad[a_off + i] += scale * alpha * phi.value;
  }
}

Eigen::VectorXd PotModel::do_state_gradient(StateRef x, const ParamVector& theta) const {
  const auto J = theta.block("J");
  const auto log_alpha = theta.block("log_alpha");
  const Eigen::VectorXd u = J * x;
  Eigen::VectorXd c(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) c[i] = std::exp(log_alpha(i, 0)) * StudentT(u[i]).d1;
  return J.transpose() * c;
}

double PotModel::do_state_laplacian(StateRef x, const ParamVector& theta) const {
  const auto J = theta.block("J");
  const auto log_alpha = theta.block("log_alpha");
  const Eigen::VectorXd u = J * x;
  double lap = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    lap += std::exp(log_alpha(i, 0)) * StudentT(u[i]).d2 * J.row(i).squaredNorm();
  }
  return lap;
}

double PotModel::do_score_matching_term(StateRef x, const ParamVector& theta, double scale,
                                        GradRef grad) const {
  const auto J = theta.block("J");
  const auto log_alpha = theta.block("log_alpha");
  const auto j_off = static_cast<Eigen::Index>(theta.layout().segment("J").offset);
  const auto a_off = static_cast<Eigen::Index>(theta.layout().segment("log_alpha").offset);
  MatrixMap GJ(grad.data() + j_off, J.rows(), J.cols());

  const Eigen::VectorXd u = J * x;
  const auto n = u.size();
  Eigen::VectorXd alpha(n);
  std::vector<StudentT> phi;
  phi.reserve(static_cast<std::size_t>(n));
  Eigen::VectorXd c(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    alpha[i] = std::exp(log_alpha(i, 0));
    phi.emplace_back(u[i]);
    c[i] = alpha[i] * phi.back().d1;
  }
  const Eigen::VectorXd g = J.transpose() * c;
  const Eigen::VectorXd proj = J * g;  // J_i · ∇ₓE
  double lap = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double row_norm2 = J.row(i).squaredNorm();
    const auto& p = phi[static_cast<std::size_t>(i)];
    lap += alpha[i] * p.d2 * row_norm2;

    // d/dJ_i of ½‖g‖²  minus  d/dJ_i of the Laplacian.
    Eigen::RowVectorXd dJ = c[i] * g.transpose() + (proj[i] * alpha[i] * p.d2) * x.transpose();
    dJ -= alpha[i] * (2.0 * p.d2 * J.row(i) + (row_norm2 * p.d3) * x.transpose());
    GJ.row(i) += scale * dJ;
    grad[a_off + i] += scale * alpha[i] * (p.d1 * proj[i] - p.d2 * row_norm2);
  }
  return 0.5 * g.squaredNorm() - lap;
}

}  // namespace mpf
