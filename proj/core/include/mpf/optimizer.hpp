#pragma once

#include "mpf/param_vector.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace mpf {

struct OptimizerConfig {
  std::size_t max_iterations = 1000;
  double gradient_norm_tolerance = 1e-7;
  /// Stop when |f_k − f_{k+1}| ≤ tol · max(|f_k|, |f_{k+1}|, 1). The default
  /// only fires once progress is within a few ulps of f, so the gradient
  /// test normally ends the run.
  double relative_value_tolerance = 1e-15;
  /// Curvature pairs kept by L-BFGS.
  std::size_t history_size = 10;
  /// Strong Wolfe constants: sufficient decrease c1 and curvature c2.
  double c1 = 1e-4;
  double c2 = 0.9;
  std::size_t max_line_search_evaluations = 40;

  void validate() const;
};

struct IterationRecord {
  std::size_t iteration = 0;
  double value = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
  double elapsed_ms = 0.0;
};

enum class Termination { gradient_tolerance, value_tolerance, max_iterations, line_search_stall };

std::string to_string(Termination reason);

struct FitTrace {
  /// Record 0 is the starting point.
  std::vector<IterationRecord> records;
  Termination reason = Termination::max_iterations;

  bool converged() const noexcept {
    return reason == Termination::gradient_tolerance || reason == Termination::value_tolerance;
  }
};

struct ValueAndGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

using Objective = std::function<ValueAndGradient(const Eigen::VectorXd&)>;

/// Called before each iteration after the first with the iteration number.
/// Returning true signals the objective changed (e.g. redrawn neighbours),
/// so the current point is re-evaluated and the curvature history dropped.
using IterationHook = std::function<bool(std::size_t)>;

struct MinimizeResult {
  ParamVector theta;
  double value = 0.0;
  Eigen::VectorXd gradient;
  FitTrace trace;
};

/// L-BFGS with a strong-Wolfe line search. Throws InvalidArgument if the
/// objective is not finite at θ0. A failed line search ends the run at the
/// best point seen, with reason line_search_stall.
MinimizeResult minimize(const Objective& objective, const ParamVector& theta0, const OptimizerConfig& cfg = {},
                        const IterationHook& hook = {});

}  // namespace mpf
