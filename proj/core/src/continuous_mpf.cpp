#include "mpf/continuous_mpf.hpp"

#include "mpf/error.hpp"
#include "parallel.hpp"

#include <cmath>
#include <random>

namespace mpf {

namespace {

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t data_index, std::uint64_t draw) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(data_index), static_cast<std::uint32_t>(data_index >> 32),
                    static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(draw >> 32)};
  return std::mt19937_64(seq);
}

Eigen::VectorXd noise_vector(std::size_t d, double sigma, std::uint64_t seed, std::uint64_t data_index,
                             std::uint64_t draw) {
  auto rng = stream_for(seed, data_index, draw);
  std::normal_distribution<double> normal(0.0, sigma);
  Eigen::VectorXd n(static_cast<Eigen::Index>(d));
  for (Eigen::Index k = 0; k < n.size(); ++k) n[k] = normal(rng);
  return n;
}

struct Partial {
  double value = 0.0;
  Eigen::VectorXd grad;
  double n_terms = 0.0;
};

}  // namespace

void NeighborConfig::validate() const {
  if (n_neighbors == 0) throw InvalidArgument("n_neighbors must be at least 1");
  if (!(noise_scale > 0.0) || !std::isfinite(noise_scale)) throw InvalidArgument("noise_scale must be positive");
  if (symmetric_pairs && n_neighbors % 2 != 0) {
    throw InvalidArgument("symmetric_pairs needs an even n_neighbors");
  }
}

std::vector<Eigen::VectorXd> sample_neighbors(StateRef x, const NeighborConfig& cfg, std::uint64_t data_index) {
  cfg.validate();
  const double norm = x.norm();
  if (cfg.rescale_to_input_norm && !(norm > 0.0)) {
    throw InvalidArgument("cannot rescale neighbours of a zero-norm state");
  }
  const auto d = static_cast<std::size_t>(x.size());
  std::vector<Eigen::VectorXd> out;
  out.reserve(cfg.n_neighbors);
  for (std::size_t r = 0; r < cfg.n_neighbors; ++r) {
    Eigen::VectorXd noise;
    if (cfg.symmetric_pairs) {
      noise = noise_vector(d, cfg.noise_scale, cfg.seed, data_index, r / 2);
      if (r % 2 == 1) noise = -noise;
    } else {
      noise = noise_vector(d, cfg.noise_scale, cfg.seed, data_index, r);
    }
    Eigen::VectorXd y = x + noise;
    if (cfg.rescale_to_input_norm) {
      const double ny = y.norm();
      if (!(ny > 0.0)) throw NumericError("perturbed state has zero norm", std::vector<double>(x.begin(), x.end()));
      y *= norm / ny;
    }
    out.push_back(std::move(y));
  }
  return out;
}

double proposal_log_ratio(StateRef from, StateRef to, const NeighborConfig& cfg) {
  if (cfg.rescale_to_input_norm) {
    // The rescaled proposal keeps both points on the sphere of radius ‖x‖ and
    // its density depends only on that radius and the angle between the two
    // points, both unchanged when they swap roles.
    return 0.0;
  }
  const double s2 = cfg.noise_scale * cfg.noise_scale;
  const double fwd = -(from - to).squaredNorm() / (2.0 * s2);
  const double bwd = -(to - from).squaredNorm() / (2.0 * s2);
  return fwd - bwd;
}

ContinuousMpfObjective::ContinuousMpfObjective(ModelPtr model, const ContinuousDataset& data, NeighborConfig cfg,
                                               double flow_time, unsigned threads, double clamp_cap)
    : model_(std::move(model)), data_(data.rows()), cfg_(cfg), flow_time_(flow_time), threads_(threads),
      cap_(clamp_cap) {
  if (!model_) throw InvalidArgument("objective needs a model");
  if (model_->is_discrete()) throw UnsupportedCapability(model_->kind() + ": continuous MPF needs a continuous model");
  if (data.dim() != model_->dim()) throw InvalidArgument("dataset dimension does not match model dimension");
  if (!(flow_time > 0.0) || !std::isfinite(flow_time)) throw InvalidArgument("flow time must be positive and finite");
  cfg_.validate();
  draw();
}

void ContinuousMpfObjective::resample(std::uint64_t seed) {
  cfg_.seed = seed;
  draw();
}

void ContinuousMpfObjective::draw() {
  const auto n = data_.rows();
  const auto m = static_cast<Eigen::Index>(cfg_.n_neighbors);
  neighbors_.assign(cfg_.n_neighbors, Eigen::MatrixXd(n, data_.cols()));
  half_log_ratio_ = Eigen::MatrixXd::Zero(n, m);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::VectorXd x = data_.row(j).transpose();
    const auto nb = sample_neighbors(x, cfg_, static_cast<std::uint64_t>(j));
    for (Eigen::Index r = 0; r < m; ++r) {
      const auto& y = nb[static_cast<std::size_t>(r)];
      neighbors_[static_cast<std::size_t>(r)].row(j) = y.transpose();
      // Γ_x̃x carries (g(x | x̃) / g(x̃ | x))^½.
      if (cfg_.hastings_correction) half_log_ratio_(j, r) = 0.5 * proposal_log_ratio(x, y, cfg_);
    }
  }
}

ObjectiveReport ContinuousMpfObjective::evaluate(const ParamVector& theta) const {
  if (!theta.all_finite()) throw InvalidArgument("parameters must be finite");
  const auto n_rows = static_cast<std::size_t>(data_.rows());
  const std::size_t n_chunks = (n_rows + detail::kChunkRows - 1) / detail::kChunkRows;
  const auto n_params = static_cast<Eigen::Index>(theta.size());

  auto partials = detail::run_chunks<Partial>(n_chunks, threads_, [&](std::size_t c) {
    const auto begin = static_cast<Eigen::Index>(c * detail::kChunkRows);
    const auto end = static_cast<Eigen::Index>(std::min(n_rows, (c + 1) * detail::kChunkRows));
    Partial p;
    p.grad = Eigen::VectorXd::Zero(n_params);
    for (Eigen::Index j = begin; j < end; ++j) {
      const Eigen::VectorXd x = data_.row(j).transpose();
      const double ej = model_->energy(x, theta);
      if (!std::isfinite(ej)) throw NumericError("non-finite energy at a data state", {x.begin(), x.end()});
      double slope_sum = 0.0;
      for (std::size_t r = 0; r < neighbors_.size(); ++r) {
        const Eigen::VectorXd y = neighbors_[r].row(j).transpose();
        const double ey = model_->energy(y, theta);
        if (!std::isfinite(ey)) throw NumericError("non-finite energy at a sampled neighbour", {y.begin(), y.end()});
        const double a = 0.5 * (ej - ey) + half_log_ratio_(j, static_cast<Eigen::Index>(r));
        p.value += clamped_exp(a, cap_);
        const double slope = 0.5 * clamped_exp_slope(a, cap_);
        slope_sum += slope;
        model_->accumulate_param_gradient(y, theta, -slope, p.grad);
        p.n_terms += 1.0;
      }
      model_->accumulate_param_gradient(x, theta, slope_sum, p.grad);
    }
    return p;
  });

  Partial total = detail::tree_reduce(std::move(partials), [](const Partial& a, const Partial& b) {
    return Partial{a.value + b.value, a.grad + b.grad, a.n_terms + b.n_terms};
  });

  const double scale = flow_time_ / static_cast<double>(n_rows);
  ObjectiveReport report;
  report.mode = "sampled";
  report.seed = cfg_.seed;
  report.n_terms = static_cast<std::uint64_t>(total.n_terms);
  report.value = scale * total.value;
  report.gradient = theta.zeros_like();
  report.gradient.values() = scale * total.grad;
  if (!std::isfinite(report.value) || !report.gradient.all_finite()) throw NumericError("objective is not finite", {});
  return report;
}

ObjectiveReport mpf_objective_continuous(const EnergyModel& model, const ContinuousDataset& data,
                                         const ParamVector& theta, const NeighborConfig& cfg, double flow_time) {
  ModelPtr handle(std::shared_ptr<const EnergyModel>{}, &model);
  return ContinuousMpfObjective(handle, data, cfg, flow_time).evaluate(theta);
}

}  // namespace mpf
