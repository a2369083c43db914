#pragma once

#include "mpf/dataset.hpp"
#include "mpf/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mpf {

/// Which bit-flip neighbours of each data state receive probability flow.
enum class FlowMode {
  /// Every single-bit-flip neighbour, data state or not.
  full_neighbor,
  /// Only neighbours that are not themselves observed (i ∉ D).
  strict,
};

enum class Stabilization {
  /// exp(a) up to `clamp_cap`, continued linearly (value and slope of exp
  /// at the cap) beyond it. Smooth, convex, finite for any finite θ.
  clamp,
  /// Exact value via log-sum-exp; throws NumericError if the result or a
  /// gradient weight is not representable.
  log_sum_exp,
};

struct FitConfig {
  FlowMode mode = FlowMode::full_neighbor;
  /// ε: pure multiplicative scale on value and gradient.
  double flow_time = 1.0;
  Stabilization stabilization = Stabilization::clamp;
  /// Cap on the exponent ½(E_j − E_i).
  double clamp_cap = 30.0;
  /// Worker threads for the data sum. Results do not depend on this value.
  unsigned threads = 1;

  void validate() const;
};

std::string to_string(FlowMode mode);
FlowMode parse_flow_mode(const std::string& name);

struct ObjectiveReport {
  double value = 0.0;
  ParamVector gradient;
  /// Number of (data point, neighbour) terms summed, counting multiplicity.
  std::uint64_t n_terms = 0;
  std::string mode;
  std::uint64_t seed = 0;
};

/// The d states reachable from x by flipping one bit; the k-th output has
/// bit k flipped.
std::vector<BinaryState> bitflip_neighbors(const BinaryState& x);

/// MPF objective over a fixed binary dataset with single-bit-flip connectivity:
///
///   K(θ) = (ε/|D|) Σ_{j ∈ D} Σ_{i ∈ N(j), kept(i)} exp(½(E_j − E_i))
///   ∂K/∂θ = (ε/|D|) Σ Σ ½ (∂E_j/∂θ − ∂E_i/∂θ) exp(½(E_j − E_i))
///
/// Construction precomputes the strict-mode mask; evaluation is const and
/// thread-safe. The sum runs over the dataset's sorted distinct rows weighted
/// by multiplicity in fixed-size chunks reduced by a pairwise tree, so the
/// result is bit-identical for any dataset order and any thread count.
class DiscreteMpfObjective {
 public:
  DiscreteMpfObjective(ModelPtr model, const BinaryDataset& data, FitConfig cfg = {});

  ObjectiveReport evaluate(const ParamVector& theta) const;
  /// Value only, skipping the gradient pass.
  double value(const ParamVector& theta) const;

  const EnergyModel& model() const noexcept { return *model_; }
  const FitConfig& config() const noexcept { return cfg_; }

 private:
  ObjectiveReport run(const ParamVector& theta, bool want_gradient) const;

  ModelPtr model_;
  FitConfig cfg_;
  Eigen::MatrixXd rows_;    // distinct data rows
  Eigen::VectorXd counts_;  // multiplicities
  double total_ = 0.0;      // |D|
  Eigen::MatrixXd keep_;  // distinct_count x d, 1 where the flipped neighbour is summed
};

/// One-shot evaluation.
ObjectiveReport mpf_objective(const EnergyModel& model, const BinaryDataset& data, const ParamVector& theta,
                              const FitConfig& cfg = {});

/// exp(a) with the linear continuation above `cap`, and its derivative.
double clamped_exp(double a, double cap) noexcept;
double clamped_exp_slope(double a, double cap) noexcept;

}  // namespace mpf
