#pragma once

#include "mpf/dataset.hpp"
#include "mpf/discrete_mpf.hpp"
#include "mpf/model.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

/// Dense reference implementation of the master-equation dynamics over all
/// 2^d binary states. Exponential in d: single-threaded, exact, and only for
/// validating the sparse objective on small systems.
///
/// State i has bit k equal to (i >> k) & 1.
namespace mpf::oracle {

inline constexpr std::size_t kMaxTransitionBits = 12;
inline constexpr std::size_t kMaxEnumerationBits = 20;

enum class Connectivity { bit_flip, all_pairs };

/// Γ with Γ_ij the flow rate from state j into state i; columns sum to zero.
struct TransitionMatrix {
  std::size_t d = 0;
  Eigen::MatrixXd entries;
  /// g_ij, 1 where the pair is connected.
  Eigen::MatrixXd connectivity;
};

/// Probability vector over the 2^d states.
struct DistributionVector {
  std::size_t d = 0;
  Eigen::VectorXd probs;

  /// Throws InvalidArgument unless entries are >= 0 and sum to 1 within tol.
  void validate(double tol = 1e-12) const;
};

/// E_i for every state i (d <= 20).
Eigen::VectorXd all_energies(const EnergyModel& model, const ParamVector& theta);

/// Γ_ij = g_ij exp(½(E_j − E_i)) off the diagonal, Γ_ii = −Σ_{j≠i} Γ_ji.
TransitionMatrix build_transition_matrix(const EnergyModel& model, const ParamVector& theta,
                                         Connectivity connectivity = Connectivity::bit_flip);

/// p(t) = exp(Γt) p(0) by scaling and squaring.
DistributionVector evolve(const DistributionVector& p0, const TransitionMatrix& gamma, double t);

/// max over pairs of |Γ_ji p_i − Γ_ij p_j|.
double check_detailed_balance(const TransitionMatrix& gamma, const DistributionVector& p_inf);

/// Largest |column sum| of Γ.
double max_column_sum(const TransitionMatrix& gamma);

double exact_log_partition(const EnergyModel& model, const ParamVector& theta);
double exact_partition(const EnergyModel& model, const ParamVector& theta);
DistributionVector exact_model_distribution(const EnergyModel& model, const ParamVector& theta);

/// Fraction of observations in each state.
DistributionVector empirical_distribution(const BinaryDataset& data);

/// Σ_{p_i > 0} p_i log(p_i / q_i). Throws if q_i = 0 where p_i > 0.
double exact_kl(const DistributionVector& p, const DistributionVector& q);

/// Σ_i |p_i − q_i|.
double l1_distance(const DistributionVector& p, const DistributionVector& q);

/// K summed from dense Γ entries: (ε/|D|) Σ_{j ∈ D} Σ_{i} Γ_ij over i ∉ D
/// (strict) or over every bit-flip neighbour i of j (full-neighbour).
double brute_force_K(const EnergyModel& model, const BinaryDataset& data, const ParamVector& theta,
                     double flow_time, FlowMode mode);

struct TaylorCheck {
  std::vector<double> flow_times;
  /// KL(p⁰ ‖ p^(ε)) / ε for each ε.
  std::vector<double> ratios;
  /// Linear extrapolation of the ratios to ε = 0 (the initial KL growth rate).
  double slope_at_zero = 0.0;
  /// Strict-mode K at ε = 1 from the dense sum.
  double strict_K = 0.0;
  double relative_error = 0.0;
};

TaylorCheck taylor_check(const EnergyModel& model, const BinaryDataset& data, const ParamVector& theta,
                         const std::vector<double>& flow_times = {1e-3, 1e-4, 1e-5});

/// Central-difference Hessian of the discrete MPF objective, built from
/// differences of its analytic gradient and symmetrised.
Eigen::MatrixXd numerical_hessian_of_K(const EnergyModel& model, const BinaryDataset& data, const ParamVector& theta,
                                       double h = 1e-4, const FitConfig& cfg = {});

double min_eigenvalue(const Eigen::MatrixXd& symmetric);

struct LikelihoodReport {
  double value = 0.0;
  ParamVector gradient;
};

/// Average negative log-likelihood (1/|D|) Σ E(x_n) + log Z and its exact
/// gradient ⟨∂E/∂θ⟩_data − ⟨∂E/∂θ⟩_model, by enumeration (d <= 20).
LikelihoodReport exact_negative_log_likelihood(const EnergyModel& model, const BinaryDataset& data,
                                               const ParamVector& theta);

}  // namespace mpf::oracle
