#pragma once

#include "mpf/dataset.hpp"
#include "mpf/model.hpp"
#include "mpf/models.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace mpf::testing {

inline Eigen::VectorXd random_vector(std::size_t n, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> normal(0.0, sd);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  return v;
}

inline ParamVector random_params(const EnergyModel& model, std::mt19937_64& rng, double sd = 0.5) {
  return ParamVector(model.layout(), random_vector(model.layout().total_size(), rng, sd));
}

inline Eigen::VectorXd random_bits(std::size_t d, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  Eigen::VectorXd x(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = coin(rng) ? 1.0 : 0.0;
  return x;
}

inline BinaryDataset random_binary_dataset(std::size_t d, std::size_t n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<std::uint8_t> bits(d * n);
  for (auto& b : bits) b = coin(rng) ? 1 : 0;
  return BinaryDataset(d, std::move(bits));
}

/// Central differences of a scalar function of a vector.
inline Eigen::VectorXd finite_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                         const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

/// ‖a − b‖ / max(‖b‖, floor).
inline double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor = 1e-8) {
  return (a - b).norm() / std::max(b.norm(), floor);
}

inline double relative_error(double a, double b, double floor = 1e-300) {
  return std::abs(a - b) / std::max(std::abs(b), floor);
}

/// Fixed d=3 coupling used by the shipped oracle fixture.
inline Eigen::MatrixXd fixture_coupling() {
  Eigen::MatrixXd J(3, 3);
  J << 0.3, -0.5, 0.2, 0.1, -0.4, 0.6, -0.7, 0.25, 0.15;
  return J;
}

/// E + c for a wrapped model.
class OffsetModel final : public EnergyModel {
 public:
  OffsetModel(ModelPtr inner, double offset) : inner_(std::move(inner)), offset_(offset) {}

  std::string kind() const override { return inner_->kind(); }
  std::size_t dim() const override { return inner_->dim(); }
  const ParamLayout& layout() const override { return inner_->layout(); }
  bool is_discrete() const override { return inner_->is_discrete(); }

 protected:
  double do_energy(StateRef x, const ParamVector& theta) const override {
    return inner_->energy(x, theta) + offset_;
  }
  void do_accumulate_param_gradient(StateRef x, const ParamVector& theta, double scale,
                                    GradRef grad) const override {
    inner_->accumulate_param_gradient(x, theta, scale, grad);
  }

 private:
  ModelPtr inner_;
  double offset_;
};

}  // namespace mpf::testing
