#pragma once

#include "mpf/continuous_mpf.hpp"
#include "mpf/discrete_mpf.hpp"
#include "mpf/optimizer.hpp"

#include <cstdint>

namespace mpf {

/// Starting point for a fit: zeros for Ising, θ = 1 for the Gaussian toy,
/// N(0, 0.01²) entries for RBM weights and PoT filters (log_alpha = 0).
/// RBM weights cannot start at exactly zero: the hidden units would stay
/// interchangeable for the whole fit.
ParamVector default_initial_params(const EnergyModel& model, std::uint64_t seed = 0);

/// The MPF fits apply the gradient-norm tolerance to ∇K/ε, so the stopping
/// point does not depend on the flow time.
MinimizeResult fit_discrete(const DiscreteMpfObjective& objective, const ParamVector& theta0,
                            const OptimizerConfig& opt = {});

/// Neighbour handling across optimizer iterations.
enum class NeighborSchedule {
  /// One draw for the whole fit; the objective is deterministic.
  frozen,
  /// Redraw before every iteration from seed + iteration.
  stochastic,
};

MinimizeResult fit_continuous(ModelPtr model, const ContinuousDataset& data, const NeighborConfig& cfg,
                              const ParamVector& theta0, const OptimizerConfig& opt = {}, double flow_time = 1.0,
                              NeighborSchedule schedule = NeighborSchedule::frozen, unsigned threads = 1);

/// Minimizes the score-matching objective divided by |D|.
MinimizeResult fit_score_matching(const EnergyModel& model, const ContinuousDataset& data, const ParamVector& theta0,
                                  const OptimizerConfig& opt = {}, unsigned threads = 1);

/// Maximum likelihood by exact enumeration of Z (d <= 20).
MinimizeResult fit_exact_ml(const EnergyModel& model, const BinaryDataset& data, const ParamVector& theta0,
                            const OptimizerConfig& opt = {});

}  // namespace mpf
