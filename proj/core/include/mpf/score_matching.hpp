#pragma once

#include "mpf/dataset.hpp"
#include "mpf/model.hpp"

namespace mpf {

struct SmReport {
  double value = 0.0;
  ParamVector gradient;
};

/// Score-matching objective, the small-step limit of continuous MPF:
///
///   K_SM(θ) = Σ_{x ∈ D} [ ½ ‖∇ₓE(x; θ)‖² − ∇ₓ²E(x; θ) ]
///
/// Needs a model with analytic state derivatives; throws
/// UnsupportedCapability otherwise.
SmReport score_matching_objective(const EnergyModel& model, const ContinuousDataset& data, const ParamVector& theta,
                                  unsigned threads = 1);

}  // namespace mpf
