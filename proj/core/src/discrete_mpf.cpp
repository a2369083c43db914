#include "mpf/discrete_mpf.hpp"

#include "mpf/error.hpp"
#include "parallel.hpp"

#include <cmath>
#include <limits>

namespace mpf {

namespace {

struct Partial {
  double value = 0.0;
  Eigen::VectorXd grad;
  double n_terms = 0.0;
};

Partial combine(const Partial& a, const Partial& b) {
  Partial out;
  out.value = a.value + b.value;
  if (a.grad.size() == 0) {
    out.grad = b.grad;
  } else if (b.grad.size() == 0) {
    out.grad = a.grad;
  } else {
    out.grad = a.grad + b.grad;
  }
  out.n_terms = a.n_terms + b.n_terms;
  return out;
}

std::vector<double> row_vector(const Eigen::MatrixXd& m, Eigen::Index r) {
  std::vector<double> v(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index k = 0; k < m.cols(); ++k) v[static_cast<std::size_t>(k)] = m(r, k);
  return v;
}

void check_finite(const Eigen::MatrixXd& delta, const Eigen::MatrixXd& rows) {
  if (delta.allFinite()) return;
  for (Eigen::Index r = 0; r < delta.rows(); ++r) {
    if (!delta.row(r).allFinite()) {
      throw NumericError("non-finite energy difference at a data state", row_vector(rows, r));
    }
  }
}

}  // namespace

double clamped_exp(double a, double cap) noexcept {
  if (a <= cap) return std::exp(a);
  return std::exp(cap) * (1.0 + (a - cap));
}

double clamped_exp_slope(double a, double cap) noexcept { return std::exp(std::min(a, cap)); }

void FitConfig::validate() const {
  if (!(flow_time > 0.0) || !std::isfinite(flow_time)) throw InvalidArgument("flow time must be positive and finite");
  if (stabilization == Stabilization::clamp && !std::isfinite(clamp_cap)) {
    throw InvalidArgument("clamp cap must be finite");
  }
}

std::string to_string(FlowMode mode) { return mode == FlowMode::strict ? "strict" : "full-neighbor"; }

FlowMode parse_flow_mode(const std::string& name) {
  if (name == "strict") return FlowMode::strict;
  if (name == "full-neighbor" || name == "full") return FlowMode::full_neighbor;
  throw InvalidArgument("unknown mode '" + name + "' (expected strict or full-neighbor)");
}

std::vector<BinaryState> bitflip_neighbors(const BinaryState& x) {
  std::vector<BinaryState> out;
  out.reserve(x.dim());
  for (std::size_t k = 0; k < x.dim(); ++k) out.push_back(x.flipped(k));
  return out;
}

DiscreteMpfObjective::DiscreteMpfObjective(ModelPtr model, const BinaryDataset& data, FitConfig cfg)
    : model_(std::move(model)), cfg_(cfg), rows_(data.distinct_rows()), counts_(data.distinct_counts()),
      total_(static_cast<double>(data.size())) {
  if (!model_) throw InvalidArgument("objective needs a model");
  cfg_.validate();
  if (!model_->is_discrete()) throw UnsupportedCapability(model_->kind() + ": discrete MPF needs a binary model");
  if (data.dim() != model_->dim()) {
    throw InvalidArgument("dataset dimension " + std::to_string(data.dim()) + " does not match model dimension " +
                          std::to_string(model_->dim()));
  }
  keep_ = Eigen::MatrixXd::Ones(rows_.rows(), rows_.cols());
  if (cfg_.mode == FlowMode::strict) {
    std::vector<std::uint8_t> bits(data.dim());
    for (Eigen::Index r = 0; r < rows_.rows(); ++r) {
      for (Eigen::Index k = 0; k < rows_.cols(); ++k) bits[static_cast<std::size_t>(k)] = rows_(r, k) != 0.0;
      for (Eigen::Index k = 0; k < rows_.cols(); ++k) {
        bits[static_cast<std::size_t>(k)] ^= 1U;
        if (data.contains(bits)) keep_(r, k) = 0.0;
        bits[static_cast<std::size_t>(k)] ^= 1U;
      }
    }
  }
}

ObjectiveReport DiscreteMpfObjective::evaluate(const ParamVector& theta) const { return run(theta, true); }

double DiscreteMpfObjective::value(const ParamVector& theta) const { return run(theta, false).value; }

ObjectiveReport DiscreteMpfObjective::run(const ParamVector& theta, bool want_gradient) const {
  if (!theta.all_finite()) throw InvalidArgument("parameters must be finite");
  const auto n_rows = static_cast<std::size_t>(rows_.rows());
  const std::size_t n_chunks = (n_rows + detail::kChunkRows - 1) / detail::kChunkRows;
  const auto n_params = static_cast<Eigen::Index>(theta.size());
  const double scale = cfg_.flow_time / total_;
  const bool lse = cfg_.stabilization == Stabilization::log_sum_exp;
  const double cap = cfg_.clamp_cap;

  auto chunk_bounds = [&](std::size_t c) {
    const auto begin = static_cast<Eigen::Index>(c * detail::kChunkRows);
    const auto len = static_cast<Eigen::Index>(std::min(detail::kChunkRows, n_rows - c * detail::kChunkRows));
    return std::pair{begin, len};
  };

  // Exponent arguments ½(E_j − E_i) = −½ Δ for every row/bit of a chunk.
  auto chunk_args = [&](std::size_t c, Eigen::MatrixXd& states, Eigen::MatrixXd& args) {
    const auto [begin, len] = chunk_bounds(c);
    states = rows_.middleRows(begin, len);
    Eigen::MatrixXd delta;
    model_->flip_energy_diffs(states, theta, delta);
    check_finite(delta, states);
    args = -0.5 * delta;
  };

  // Log-sum-exp needs the global maximum exponent before accumulating.
  double shift = 0.0;
  if (lse) {
    auto maxima = detail::run_chunks<double>(n_chunks, cfg_.threads, [&](std::size_t c) {
      Eigen::MatrixXd states, args;
      chunk_args(c, states, args);
      const auto keep = keep_.middleRows(chunk_bounds(c).first, states.rows());
      double m = -std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < args.rows(); ++r)
        for (Eigen::Index k = 0; k < args.cols(); ++k)
          if (keep(r, k) != 0.0) m = std::max(m, args(r, k));
      return m;
    });
    shift = -std::numeric_limits<double>::infinity();
    for (double m : maxima) shift = std::max(shift, m);
    if (!std::isfinite(shift)) shift = 0.0;  // nothing kept
    if (!std::isfinite(std::exp(shift))) {
      throw NumericError("log-sum-exp: gradient weights exceed double range", {});
    }
  }

  auto partials = detail::run_chunks<Partial>(n_chunks, cfg_.threads, [&](std::size_t c) {
    Eigen::MatrixXd states, args;
    chunk_args(c, states, args);
    const auto [begin, len] = chunk_bounds(c);
    const auto keep = keep_.middleRows(begin, len);
    const auto counts = counts_.segment(begin, len);

    Eigen::MatrixXd weight(args.rows(), args.cols());
    Eigen::MatrixXd slope(args.rows(), args.cols());
    for (Eigen::Index r = 0; r < args.rows(); ++r) {
      for (Eigen::Index k = 0; k < args.cols(); ++k) {
        const double a = args(r, k);
        if (lse) {
          weight(r, k) = std::exp(a - shift);
          slope(r, k) = weight(r, k);
        } else {
          weight(r, k) = clamped_exp(a, cap);
          slope(r, k) = clamped_exp_slope(a, cap);
        }
      }
    }
    const Eigen::MatrixXd kept_counts = keep.array().colwise() * counts.array();

    Partial p;
    p.value = (kept_counts.array() * weight.array()).sum();
    p.n_terms = kept_counts.sum();
    if (want_gradient) {
      p.grad = Eigen::VectorXd::Zero(n_params);
      // d/dθ exp(−½Δ) = −½ exp(−½Δ) dΔ/dθ
      const Eigen::MatrixXd coeff = -0.5 * (kept_counts.array() * slope.array()).matrix();
      model_->accumulate_flip_gradient(states, coeff, theta, p.grad);
    }
    return p;
  });

  Partial total = detail::tree_reduce(std::move(partials), combine);

  ObjectiveReport report;
  report.mode = to_string(cfg_.mode);
  report.n_terms = static_cast<std::uint64_t>(total.n_terms);
  report.gradient = theta.zeros_like();
  if (lse) {
    const double log_value = std::log(scale) + shift + std::log(total.value);
    report.value = total.value > 0.0 ? std::exp(log_value) : 0.0;
    if (!std::isfinite(report.value)) throw NumericError("log-sum-exp: objective exceeds double range", {});
    if (want_gradient) report.gradient.values() = (scale * std::exp(shift)) * total.grad;
  } else {
    report.value = scale * total.value;
    if (want_gradient) report.gradient.values() = scale * total.grad;
  }
  if (!std::isfinite(report.value) || (want_gradient && !report.gradient.all_finite())) {
    throw NumericError("objective is not finite", {});
  }
  return report;
}

ObjectiveReport mpf_objective(const EnergyModel& model, const BinaryDataset& data, const ParamVector& theta,
                              const FitConfig& cfg) {
  // Non-owning handle; the model outlives this call.
  ModelPtr handle(std::shared_ptr<const EnergyModel>{}, &model);
  return DiscreteMpfObjective(handle, data, cfg).evaluate(theta);
}

}  // namespace mpf
