#include "mpf/score_matching.hpp"

#include "mpf/error.hpp"
#include "parallel.hpp"

#include <cmath>

namespace mpf {

SmReport score_matching_objective(const EnergyModel& model, const ContinuousDataset& data, const ParamVector& theta,
                                  unsigned threads) {
  if (!model.has_state_derivatives()) {
    throw UnsupportedCapability(model.kind() + ": score matching needs analytic state derivatives");
  }
  if (data.dim() != model.dim()) throw InvalidArgument("dataset dimension does not match model dimension");

  struct Partial {
    double value = 0.0;
    Eigen::VectorXd grad;
  };
  const auto& rows = data.rows();
  const std::size_t n = data.size();
  const std::size_t n_chunks = (n + detail::kChunkRows - 1) / detail::kChunkRows;
  auto partials = detail::run_chunks<Partial>(n_chunks, threads, [&](std::size_t c) {
    Partial p;
    p.grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(theta.size()));
    const auto end = std::min(n, (c + 1) * detail::kChunkRows);
    for (std::size_t j = c * detail::kChunkRows; j < end; ++j) {
      const Eigen::VectorXd x = rows.row(static_cast<Eigen::Index>(j)).transpose();
      p.value += model.score_matching_term(x, theta, 1.0, p.grad);
    }
    return p;
  });
  auto total = detail::tree_reduce(std::move(partials), [](const Partial& a, const Partial& b) {
    return Partial{a.value + b.value, a.grad + b.grad};
  });

  SmReport report;
  report.value = total.value;
  report.gradient = theta.zeros_like();
  report.gradient.values() = total.grad;
  if (!std::isfinite(report.value) || !report.gradient.all_finite()) {
    throw NumericError("score-matching objective is not finite", {});
  }
  return report;
}

}  // namespace mpf
