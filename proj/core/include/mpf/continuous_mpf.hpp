#pragma once

#include "mpf/dataset.hpp"
#include "mpf/discrete_mpf.hpp"
#include "mpf/model.hpp"

#include <cstdint>
#include <vector>

namespace mpf {

/// Sampled connectivity for continuous states: each data point x is linked
/// to `n_neighbors` states x̃ = (x + n)·‖x‖/‖x + n‖ with n ~ N(0, σ² I).
struct NeighborConfig {
  std::size_t n_neighbors = 2;
  /// σ, the standard deviation of each noise coordinate.
  double noise_scale = 0.1;
  bool rescale_to_input_norm = true;
  /// Multiply Γ by (g_ji / g_ij)^½ for the proposal density g.
  bool hastings_correction = false;
  /// Draw noise in antithetic pairs (n, −n); needs an even neighbour count.
  bool symmetric_pairs = false;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Neighbours of x. Draw `r` for data index `i` depends only on
/// (seed, i, r), so any partition of the data reproduces the same draws.
std::vector<Eigen::VectorXd> sample_neighbors(StateRef x, const NeighborConfig& cfg, std::uint64_t data_index);

/// log g(from | to) − log g(to | from) for the proposal described by cfg.
double proposal_log_ratio(StateRef from, StateRef to, const NeighborConfig& cfg);

/// Continuous MPF with sampled neighbours:
///
///   K(θ) = (ε/|D|) Σ_j Σ_{x̃ ∈ N(j)} h_j,x̃ · exp(½(E(j) − E(x̃)))
///
/// h is the Hastings factor (1 unless enabled). Neighbours are drawn at
/// construction and held fixed, so `evaluate` is a deterministic function of
/// θ; `resample` redraws them from a new seed.
class ContinuousMpfObjective {
 public:
  ContinuousMpfObjective(ModelPtr model, const ContinuousDataset& data, NeighborConfig cfg,
                         double flow_time = 1.0, unsigned threads = 1, double clamp_cap = 30.0);

  ObjectiveReport evaluate(const ParamVector& theta) const;
  void resample(std::uint64_t seed);

  const NeighborConfig& config() const noexcept { return cfg_; }
  /// Neighbour r of every data row, as a |D| x d matrix.
  const Eigen::MatrixXd& neighbors(std::size_t r) const { return neighbors_.at(r); }

 private:
  void draw();

  ModelPtr model_;
  Eigen::MatrixXd data_;
  NeighborConfig cfg_;
  double flow_time_;
  unsigned threads_;
  double cap_;
  std::vector<Eigen::MatrixXd> neighbors_;
  Eigen::MatrixXd half_log_ratio_;  // |D| x n_neighbors, ½ log(g_ji/g_ij) or 0
};

ObjectiveReport mpf_objective_continuous(const EnergyModel& model, const ContinuousDataset& data,
                                         const ParamVector& theta, const NeighborConfig& cfg,
                                         double flow_time = 1.0);

}  // namespace mpf
