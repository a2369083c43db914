#include "mpf/error.hpp"
#include "mpf/models.hpp"

namespace mpf {

GaussianToyModel::GaussianToyModel(std::size_t d) : d_(d) {
  if (d == 0) throw InvalidArgument("gaussian_toy: d must be positive");
  layout_.add("theta", 1, 1);
}

ParamVector GaussianToyModel::make_params(double theta) const {
  ParamVector p(layout_);
  p.values()[0] = theta;
  return p;
}

double GaussianToyModel::do_energy(StateRef x, const ParamVector& theta) const {
  return 0.5 * theta.values()[0] * x.squaredNorm();
}

void GaussianToyModel::do_accumulate_param_gradient(StateRef x, const ParamVector&, double scale,
                                                    GradRef grad) const {
  grad[0] += scale * 0.5 * x.squaredNorm();
}

Eigen::VectorXd GaussianToyModel::do_state_gradient(StateRef x, const ParamVector& theta) const {
  return theta.values()[0] * x;
}

double GaussianToyModel::do_state_laplacian(StateRef, const ParamVector& theta) const {
  return theta.values()[0] * static_cast<double>(d_);
}

double GaussianToyModel::do_score_matching_term(StateRef x, const ParamVector& theta, double scale,
                                                GradRef grad) const {
  const double t = theta.values()[0];
  const double r2 = x.squaredNorm();
  const auto d = static_cast<double>(d_);
  grad[0] += scale * (t * r2 - d);
  return 0.5 * t * t * r2 - t * d;
}

}  // namespace mpf
