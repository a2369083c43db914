#pragma once

#include "mpf/model.hpp"

namespace mpf {

/// Fully visible Boltzmann machine over {0,1}^d:
///   E(x; J) = Σ_{i, j≠i} J_ij x_i x_j + Σ_i J_ii x_i
/// J is a full d x d block named "J"; only J_ij + J_ji matters off the
/// diagonal, so no symmetry is imposed.
class IsingModel final : public EnergyModel {
 public:
  explicit IsingModel(std::size_t d);

  std::string kind() const override { return "ising"; }
  std::size_t dim() const override { return d_; }
  const ParamLayout& layout() const override { return layout_; }
  bool is_discrete() const override { return true; }
  bool is_exponential_family() const override { return true; }

  ParamVector make_params(const Eigen::MatrixXd& J) const;

  /// (J + Jᵀ)/2; the energy is invariant under J -> symmetrized(J).
  static Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& J);

 protected:
  double do_energy(StateRef x, const ParamVector& theta) const override;
  void do_accumulate_param_gradient(StateRef x, const ParamVector& theta, double scale,
                                    GradRef grad) const override;
  double do_energy_diff(StateRef x, std::size_t k, const ParamVector& theta) const override;
  void do_accumulate_energy_diff_gradient(StateRef x, std::size_t k, const ParamVector& theta, double scale,
                                          GradRef grad) const override;
  void do_flip_energy_diffs(const Eigen::MatrixXd& states, const ParamVector& theta,
                            Eigen::MatrixXd& delta) const override;
  void do_accumulate_flip_gradient(const Eigen::MatrixXd& states, const Eigen::MatrixXd& coeff,
                                   const ParamVector& theta, GradRef grad) const override;

 private:
  std::size_t d_;
  ParamLayout layout_;
};

/// Restricted Boltzmann machine with its binary hidden layer summed out:
///   E(x; W) = -Σ_j softplus(-Σ_i W_ij x_i)
/// W is d_vis x d_hid, block "W". The joint energy is Σ_ij W_ij x_i h_j.
class RbmMarginalModel final : public EnergyModel {
 public:
  RbmMarginalModel(std::size_t d_vis, std::size_t d_hid);

  std::string kind() const override { return "rbm_marginal"; }
  std::size_t dim() const override { return d_vis_; }
  std::size_t hidden_dim() const noexcept { return d_hid_; }
  const ParamLayout& layout() const override { return layout_; }
  bool is_discrete() const override { return true; }

  ParamVector make_params(const Eigen::MatrixXd& W) const;

 protected:
  double do_energy(StateRef x, const ParamVector& theta) const override;
  void do_accumulate_param_gradient(StateRef x, const ParamVector& theta, double scale,
                                    GradRef grad) const override;
  double do_energy_diff(StateRef x, std::size_t k, const ParamVector& theta) const override;
  void do_accumulate_energy_diff_gradient(StateRef x, std::size_t k, const ParamVector& theta, double scale,
                                          GradRef grad) const override;
  void do_flip_energy_diffs(const Eigen::MatrixXd& states, const ParamVector& theta,
                            Eigen::MatrixXd& delta) const override;
  void do_accumulate_flip_gradient(const Eigen::MatrixXd& states, const Eigen::MatrixXd& coeff,
                                   const ParamVector& theta, GradRef grad) const override;

 private:
  std::size_t d_vis_;
  std::size_t d_hid_;
  ParamLayout layout_;
};

/// Product of Student-t experts over R^d:
///   E(x) = Σ_i α_i log(1 + (J_i · x)²),  α_i = exp(log_alpha_i)
/// Blocks: "J" (n_filters x d) and "log_alpha" (n_filters x 1).
class PotModel final : public EnergyModel {
 public:
  PotModel(std::size_t d, std::size_t n_filters);

  std::string kind() const override { return "product_of_t"; }
  std::size_t dim() const override { return d_; }
  std::size_t n_filters() const noexcept { return n_; }
  const ParamLayout& layout() const override { return layout_; }
  bool is_discrete() const override { return false; }
  bool has_state_derivatives() const override { return true; }

  ParamVector make_params(const Eigen::MatrixXd& filters, const Eigen::VectorXd& log_alpha) const;

 protected:
  double do_energy(StateRef x, const ParamVector& theta) const override;
  void do_accumulate_param_gradient(StateRef x, const ParamVector& theta, double scale,
                                    GradRef grad) const override;
  Eigen::VectorXd do_state_gradient(StateRef x, const ParamVector& theta) const override;
  double do_state_laplacian(StateRef x, const ParamVector& theta) const override;
  double do_score_matching_term(StateRef x, const ParamVector& theta, double scale,
                                GradRef grad) const override;

 private:
  std::size_t d_;
  std::size_t n_;
  ParamLayout layout_;
};

/// Isotropic Gaussian with scalar precision: E(x) = θ ‖x‖² / 2, block "theta".
class GaussianToyModel final : public EnergyModel {
 public:
  explicit GaussianToyModel(std::size_t d = 1);

  std::string kind() const override { return "gaussian_toy"; }
  std::size_t dim() const override { return d_; }
  const ParamLayout& layout() const override { return layout_; }
  bool is_discrete() const override { return false; }
  bool is_exponential_family() const override { return true; }
  bool has_state_derivatives() const override { return true; }

  ParamVector make_params(double theta) const;

 protected:
  double do_energy(StateRef x, const ParamVector& theta) const override;
  void do_accumulate_param_gradient(StateRef x, const ParamVector& theta, double scale,
                                    GradRef grad) const override;
  Eigen::VectorXd do_state_gradient(StateRef x, const ParamVector& theta) const override;
  double do_state_laplacian(StateRef x, const ParamVector& theta) const override;
  double do_score_matching_term(StateRef x, const ParamVector& theta, double scale,
                                GradRef grad) const override;

 private:
  std::size_t d_;
  ParamLayout layout_;
};

}  // namespace mpf
