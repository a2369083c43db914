#include "mpf/optimizer.hpp"

#include "mpf/error.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

namespace mpf {

namespace {

struct Point {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;  // g(x + αp) · p
  Eigen::VectorXd x;
  Eigen::VectorXd g;
};

double cubic_minimizer(const Point& a, const Point& b) {
  const double lo = std::min(a.alpha, b.alpha);
  const double hi = std::max(a.alpha, b.alpha);
  const double mid = 0.5 * (lo + hi);
  const double d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
  const double disc = d1 * d1 - a.slope * b.slope;
  if (!(disc >= 0.0)) return mid;
  const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
  const double alpha = b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / (b.slope - a.slope + 2.0 * d2);
  const double margin = 0.1 * (hi - lo);
  if (!std::isfinite(alpha) || alpha < lo + margin || alpha > hi - margin) return mid;
  return alpha;
}

class StrongWolfe {
 public:
  StrongWolfe(const Objective& objective, const Point& start, const Eigen::VectorXd& direction,
              const OptimizerConfig& cfg)
      : objective_(objective), start_(start), p_(direction), cfg_(cfg), best_(start) {}

  /// Point satisfying both Wolfe conditions, or nullopt on failure.
  std::optional<Point> search(double alpha) {
    Point prev = start_;
    for (std::size_t i = 0; evals_ < cfg_.max_line_search_evaluations; ++i) {
      Point cur = eval(alpha);
      if (!std::isfinite(cur.f)) {
        alpha = 0.5 * (prev.alpha + alpha);
        continue;
      }
      if (!sufficient_decrease(cur) || (i > 0 && cur.f >= prev.f)) return zoom(prev, cur);
      if (std::abs(cur.slope) <= -cfg_.c2 * start_.slope) return cur;
      if (cur.slope >= 0.0) return zoom(cur, prev);
      prev = cur;
      alpha *= 2.0;
    }
    return std::nullopt;
  }

  const Point& best() const noexcept { return best_; }

 private:
  Point eval(double alpha) {
    ++evals_;
    Point pt;
    pt.alpha = alpha;
    pt.x = start_.x + alpha * p_;
    ValueAndGradient vg = objective_(pt.x);
    pt.f = vg.value;
    pt.g = std::move(vg.gradient);
    if (!std::isfinite(pt.f) || !pt.g.allFinite()) {
      pt.f = std::numeric_limits<double>::infinity();
      return pt;
    }
    pt.slope = pt.g.dot(p_);
    if (pt.f < best_.f) best_ = pt;
    return pt;
  }

  bool sufficient_decrease(const Point& pt) const {
    return pt.f <= start_.f + cfg_.c1 * pt.alpha * start_.slope;
  }

  std::optional<Point> zoom(Point lo, Point hi) {
    while (evals_ < cfg_.max_line_search_evaluations) {
      const double alpha = cubic_minimizer(lo, hi);
      if (alpha == lo.alpha || alpha == hi.alpha) return std::nullopt;
      Point cur = eval(alpha);
      if (!sufficient_decrease(cur) || cur.f >= lo.f) {
        hi = std::move(cur);
        continue;
      }
      if (std::abs(cur.slope) <= -cfg_.c2 * start_.slope) return cur;
      if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
      lo = std::move(cur);
    }
    return std::nullopt;
  }

  const Objective& objective_;
  const Point& start_;
  const Eigen::VectorXd& p_;
  const OptimizerConfig& cfg_;
  Point best_;
  std::size_t evals_ = 0;
};

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

Eigen::VectorXd two_loop(const Eigen::VectorXd& g, const std::deque<CurvaturePair>& history) {
  Eigen::VectorXd q = g;
  std::vector<double> a(history.size());
  for (std::size_t i = history.size(); i-- > 0;) {
    a[i] = history[i].rho * history[i].s.dot(q);
    q -= a[i] * history[i].y;
  }
  if (!history.empty()) {
    const auto& last = history.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double b = history[i].rho * history[i].y.dot(q);
    q += (a[i] - b) * history[i].s;
  }
  return -q;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (!(gradient_norm_tolerance > 0.0)) throw InvalidArgument("gradient_norm_tolerance must be positive");
  if (!(relative_value_tolerance > 0.0)) throw InvalidArgument("relative_value_tolerance must be positive");
  if (history_size == 0) throw InvalidArgument("history_size must be at least 1");
  if (!(c1 > 0.0 && c1 < c2 && c2 < 1.0)) throw InvalidArgument("line-search constants need 0 < c1 < c2 < 1");
  if (max_line_search_evaluations == 0) throw InvalidArgument("max_line_search_evaluations must be positive");
}

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::gradient_tolerance: return "gradient-tolerance";
    case Termination::value_tolerance: return "value-tolerance";
    case Termination::max_iterations: return "max-iterations";
    case Termination::line_search_stall: return "line-search-stall";
  }
  return "unknown";
}

MinimizeResult minimize(const Objective& objective, const ParamVector& theta0, const OptimizerConfig& cfg,
                        const IterationHook& hook) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };

  Point cur;
  cur.x = theta0.values();
  auto evaluate_here = [&] {
    ValueAndGradient vg = objective(cur.x);
    cur.f = vg.value;
    cur.g = std::move(vg.gradient);
    return std::isfinite(cur.f) && cur.g.size() == cur.x.size() && cur.g.allFinite();
  };
  if (!evaluate_here()) throw InvalidArgument("objective is not finite at the starting point");

  MinimizeResult result;
  FitTrace& trace = result.trace;
  trace.records.push_back({0, cur.f, cur.g.norm(), 0.0, elapsed_ms()});
  trace.reason = Termination::max_iterations;

  std::deque<CurvaturePair> history;
  if (cur.g.norm() <= cfg.gradient_norm_tolerance) {
    trace.reason = Termination::gradient_tolerance;
  } else {
    for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
      bool changed = false;
      if (hook && k > 1 && hook(k)) {
        changed = true;
        history.clear();
        if (!evaluate_here()) throw NumericError("objective is not finite after it changed", {});
      }

      Eigen::VectorXd p = two_loop(cur.g, history);
      if (!(p.dot(cur.g) < 0.0)) {
        history.clear();
        p = -cur.g;
      }
      cur.alpha = 0.0;
      cur.slope = cur.g.dot(p);
      const double alpha0 = history.empty() ? std::min(1.0, 1.0 / cur.g.norm()) : 1.0;

      StrongWolfe ls(objective, cur, p, cfg);
      std::optional<Point> next = ls.search(alpha0);
      if (!next) {
        if (ls.best().f < cur.f) cur = ls.best();
        trace.records.push_back({k, cur.f, cur.g.norm(), cur.alpha, elapsed_ms()});
        trace.reason = Termination::line_search_stall;
        break;
      }

      Eigen::VectorXd s = next->x - cur.x;
      Eigen::VectorXd y = next->g - cur.g;
      const double sy = s.dot(y);
      if (sy > std::numeric_limits<double>::epsilon() * y.squaredNorm()) {
        history.push_back({std::move(s), std::move(y), 1.0 / sy});
        if (history.size() > cfg.history_size) history.pop_front();
      }

      const double f_prev = cur.f;
      cur = std::move(*next);
      const double gnorm = cur.g.norm();
      trace.records.push_back({k, cur.f, gnorm, cur.alpha, elapsed_ms()});

      if (gnorm <= cfg.gradient_norm_tolerance) {
        trace.reason = Termination::gradient_tolerance;
        break;
      }
      const double scale = std::max({std::abs(f_prev), std::abs(cur.f), 1.0});
      if (!changed && std::abs(f_prev - cur.f) <= cfg.relative_value_tolerance * scale) {
        trace.reason = Termination::value_tolerance;
        break;
      }
    }
  }

  result.theta = ParamVector(theta0.layout(), cur.x);
  result.value = cur.f;
  result.gradient = cur.g;
  return result;
}

}  // namespace mpf
