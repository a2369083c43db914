#pragma once

#include "mpf/dataset.hpp"
#include "mpf/param_vector.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>

namespace mpf {

using StateRef = Eigen::Ref<const Eigen::VectorXd>;
using GradRef = Eigen::Ref<Eigen::VectorXd>;

/// Parametric energy E(x; θ) with p(x) ∝ exp(-E(x; θ)) at unit temperature.
///
/// Model objects only describe shape; parameters are passed alongside so the
/// same model can be evaluated at many θ from several threads at once. The
/// public entry points validate dimensions and then dispatch to the protected
/// hooks below, which concrete models override.
///
/// Binary states are passed as 0/1 doubles. Discrete models get fast
/// single-bit-flip paths (`energy_diff` and the batched variants); the
/// defaults fall back to two full energy evaluations, so any discrete model
/// works with the objective even without a specialised override.
class EnergyModel {
 public:
  virtual ~EnergyModel() = default;

  virtual std::string kind() const = 0;
  virtual std::size_t dim() const = 0;
  virtual const ParamLayout& layout() const = 0;
  virtual bool is_discrete() const = 0;
  /// Energy linear in θ (exponential family).
  virtual bool is_exponential_family() const { return false; }
  virtual bool has_state_derivatives() const { return false; }

  double energy(StateRef x, const ParamVector& theta) const;
  double energy(const BinaryState& x, const ParamVector& theta) const;

  ParamVector param_gradient_of_energy(StateRef x, const ParamVector& theta) const;
  ParamVector param_gradient_of_energy(const BinaryState& x, const ParamVector& theta) const;
  /// grad += scale * dE(x)/dθ
  void accumulate_param_gradient(StateRef x, const ParamVector& theta, double scale, GradRef grad) const;

  /// E(flip(x, k)) - E(x).
  double energy_diff(const BinaryState& x, std::size_t k, const ParamVector& theta) const;
  double energy_diff(StateRef x, std::size_t k, const ParamVector& theta) const;
  /// d[E(flip(x, k)) - E(x)]/dθ.
  ParamVector param_gradient_of_energy_diff(const BinaryState& x, std::size_t k,
                                            const ParamVector& theta) const;

  /// delta(r, k) = E(flip(X_r, k)) - E(X_r) for every row r of X and bit k.
  void flip_energy_diffs(const Eigen::MatrixXd& states, const ParamVector& theta,
                         Eigen::MatrixXd& delta) const;
  /// grad += sum_{r,k} coeff(r, k) * d delta(r, k) / dθ.
  void accumulate_flip_gradient(const Eigen::MatrixXd& states, const Eigen::MatrixXd& coeff,
                                const ParamVector& theta, GradRef grad) const;

  /// ∇ₓE(x; θ).
  Eigen::VectorXd state_gradient(StateRef x, const ParamVector& theta) const;
  /// Trace of the state Hessian, ∇ₓ²E(x; θ).
  double state_laplacian(StateRef x, const ParamVector& theta) const;
  /// ½‖∇ₓE‖² − ∇ₓ²E at x; adds scale times its θ-gradient into grad.
  double score_matching_term(StateRef x, const ParamVector& theta, double scale, GradRef grad) const;

 protected:
  virtual double do_energy(StateRef x, const ParamVector& theta) const = 0;
  virtual void do_accumulate_param_gradient(StateRef x, const ParamVector& theta, double scale,
                                            GradRef grad) const = 0;

  virtual double do_energy_diff(StateRef x, std::size_t k, const ParamVector& theta) const;
  virtual void do_accumulate_energy_diff_gradient(StateRef x, std::size_t k, const ParamVector& theta,
                                                  double scale, GradRef grad) const;
  virtual void do_flip_energy_diffs(const Eigen::MatrixXd& states, const ParamVector& theta,
                                    Eigen::MatrixXd& delta) const;
  virtual void do_accumulate_flip_gradient(const Eigen::MatrixXd& states, const Eigen::MatrixXd& coeff,
                                           const ParamVector& theta, GradRef grad) const;

  virtual Eigen::VectorXd do_state_gradient(StateRef x, const ParamVector& theta) const;
  virtual double do_state_laplacian(StateRef x, const ParamVector& theta) const;
  virtual double do_score_matching_term(StateRef x, const ParamVector& theta, double scale,
                                        GradRef grad) const;

  void check_state(StateRef x) const;
  void check_params(const ParamVector& theta) const;
  void check_discrete(StateRef x, std::size_t k) const;
};

using ModelPtr = std::shared_ptr<const EnergyModel>;

/// Numerically stable log(1 + exp(a)).
inline double softplus(double a) noexcept { return std::max(a, 0.0) + std::log1p(std::exp(-std::abs(a))); }

/// 1 / (1 + exp(-a)) without overflow.
inline double sigmoid(double a) noexcept {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

}  // namespace mpf
