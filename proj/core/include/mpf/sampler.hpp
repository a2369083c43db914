#pragma once

#include "mpf/dataset.hpp"
#include "mpf/model_io.hpp"
#include "mpf/models.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace mpf {

using Rng = std::mt19937_64;

struct SamplerConfig {
  std::size_t n_samples = 1000;
  /// Sweeps discarded before the first kept sample; 100·d when unset.
  std::optional<std::size_t> burn_in;
  /// Sweeps between kept samples; d when unset.
  std::optional<std::size_t> thin;
  std::uint64_t seed = 0;

  std::size_t resolved_burn_in(std::size_t d) const { return burn_in.value_or(100 * d); }
  std::size_t resolved_thin(std::size_t d) const { return thin.value_or(d); }
  void validate() const;
};

/// Single-site Gibbs sampling with sites visited in ascending order. The
/// chain starts from uniformly random bits drawn from the same stream.
BinaryDataset gibbs_sample_ising(const IsingModel& model, const ParamVector& theta, const SamplerConfig& cfg);

/// Ising model with i.i.d. N(0, variance) entries in every J_ij.
ModelWithParams random_coupling(std::size_t d, double variance, std::uint64_t seed);

/// h ~ p(h | x), then x' ~ p(x | h), under the joint energy Σ_ij W_ij x_i h_j.
Eigen::VectorXd rbm_gibbs_step(const RbmMarginalModel& model, const ParamVector& theta, StateRef x, Rng& rng);

/// Block Gibbs chain over the visible units; burn-in and thinning count
/// block steps.
BinaryDataset gibbs_sample_rbm(const RbmMarginalModel& model, const ParamVector& theta, const SamplerConfig& cfg);

/// One-step contrastive divergence:
///   (1/|B|) Σ_n [∂E(x_n)/∂θ − ∂E(x'_n)/∂θ],  x'_n = rbm_gibbs_step(x_n)
/// with E the marginal energy. This estimates the gradient of the average
/// negative log-likelihood, so training steps along its negative.
ParamVector cd1_gradient(const RbmMarginalModel& model, const ParamVector& theta, const BinaryDataset& batch,
                         Rng& rng);

}  // namespace mpf
