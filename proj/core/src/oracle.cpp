#include "mpf/oracle.hpp"

#include "mpf/error.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>

namespace mpf::oracle {

namespace {

std::size_t state_count(std::size_t d) { return std::size_t{1} << d; }

void require_bits(const EnergyModel& model, std::size_t limit, const char* what) {
  if (!model.is_discrete()) throw UnsupportedCapability(model.kind() + ": dense oracle needs a binary model");
  if (model.dim() > limit) {
    throw CapacityError(std::string(what) + ": d=" + std::to_string(model.dim()) + " exceeds the limit of " +
                        std::to_string(limit) + " bits");
  }
}

Eigen::VectorXd state_vector(std::size_t index, std::size_t d) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < d; ++k) x[static_cast<Eigen::Index>(k)] = static_cast<double>((index >> k) & 1U);
  return x;
}

double log_sum_exp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  return m + std::log((v.array() - m).exp().sum());
}

Eigen::VectorXd state_counts(const BinaryDataset& data) {
  if (data.dim() > kMaxEnumerationBits) throw CapacityError("empirical distribution: too many bits");
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(state_count(data.dim())));
  for (std::size_t n = 0; n < data.size(); ++n) counts[static_cast<Eigen::Index>(data.state(n).index())] += 1.0;
  return counts;
}

}  // namespace

void DistributionVector::validate(double tol) const {
  if (static_cast<std::size_t>(probs.size()) != state_count(d)) throw InvalidArgument("distribution has wrong length");
  if ((probs.array() < 0.0).any()) throw InvalidArgument("distribution has negative entries");
  if (std::abs(probs.sum() - 1.0) > tol) throw InvalidArgument("distribution does not sum to one");
}

Eigen::VectorXd all_energies(const EnergyModel& model, const ParamVector& theta) {
  require_bits(model, kMaxEnumerationBits, "enumeration");
  const std::size_t n = state_count(model.dim());
  Eigen::VectorXd e(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) e[static_cast<Eigen::Index>(i)] = model.energy(state_vector(i, model.dim()), theta);
  return e;
}

TransitionMatrix build_transition_matrix(const EnergyModel& model, const ParamVector& theta,
                                         Connectivity connectivity) {
  require_bits(model, kMaxTransitionBits, "transition matrix");
  const std::size_t d = model.dim();
  const auto n = static_cast<Eigen::Index>(state_count(d));
  const Eigen::VectorXd e = all_energies(model, theta);

  TransitionMatrix gamma;
  gamma.d = d;
  gamma.entries = Eigen::MatrixXd::Zero(n, n);
  gamma.connectivity = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (connectivity == Connectivity::bit_flip) {
      for (std::size_t k = 0; k < d; ++k) {
        const auto i = static_cast<Eigen::Index>(static_cast<std::size_t>(j) ^ (std::size_t{1} << k));
        gamma.connectivity(i, j) = 1.0;
      }
    } else {
      gamma.connectivity.col(j).setOnes();
      gamma.connectivity(j, j) = 0.0;
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    double out = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (gamma.connectivity(i, j) == 0.0) continue;
      const double rate = std::exp(0.5 * (e[j] - e[i]));
      gamma.entries(i, j) = rate;
      out += rate;
    }
    gamma.entries(j, j) = -out;
  }
  return gamma;
}

DistributionVector evolve(const DistributionVector& p0, const TransitionMatrix& gamma, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("evolution time must be finite and non-negative");
  if (p0.probs.size() != gamma.entries.rows()) throw InvalidArgument("distribution and Γ dimensions differ");
  DistributionVector out{p0.d, p0.probs};
  if (t == 0.0) return out;
  const Eigen::MatrixXd scaled = gamma.entries * t;
  const Eigen::MatrixXd propagator = scaled.exp();
  out.probs = propagator * p0.probs;
  return out;
}

double check_detailed_balance(const TransitionMatrix& gamma, const DistributionVector& p_inf) {
  if (p_inf.probs.size() != gamma.entries.rows()) throw InvalidArgument("distribution and Γ dimensions differ");
  const auto n = gamma.entries.rows();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::abs(gamma.entries(j, i) * p_inf.probs[i] - gamma.entries(i, j) * p_inf.probs[j]);
      worst = std::max(worst, v);
    }
  }
  return worst;
}

double max_column_sum(const TransitionMatrix& gamma) {
  return gamma.entries.colwise().sum().cwiseAbs().maxCoeff();
}

double exact_log_partition(const EnergyModel& model, const ParamVector& theta) {
  return log_sum_exp(-all_energies(model, theta));
}

double exact_partition(const EnergyModel& model, const ParamVector& theta) {
  return std::exp(exact_log_partition(model, theta));
}

DistributionVector exact_model_distribution(const EnergyModel& model, const ParamVector& theta) {
  const Eigen::VectorXd neg = -all_energies(model, theta);
  const double log_z = log_sum_exp(neg);
  return {model.dim(), (neg.array() - log_z).exp().matrix()};
}

DistributionVector empirical_distribution(const BinaryDataset& data) {
  const Eigen::VectorXd counts = state_counts(data);
  return {data.dim(), counts / static_cast<double>(data.size())};
}

double exact_kl(const DistributionVector& p, const DistributionVector& q) {
  if (p.probs.size() != q.probs.size()) throw InvalidArgument("KL: distributions differ in length");
  double kl = 0.0;
  for (Eigen::Index i = 0; i < p.probs.size(); ++i) {
    const double pi = p.probs[i];
    if (pi <= 0.0) continue;
    const double qi = q.probs[i];
    if (!(qi > 0.0)) throw InvalidArgument("KL: q has zero mass where p is positive");
    kl += pi * (std::log(pi) - std::log(qi));
  }
  return kl;
}

double l1_distance(const DistributionVector& p, const DistributionVector& q) {
  if (p.probs.size() != q.probs.size()) throw InvalidArgument("distributions differ in length");
  return (p.probs - q.probs).cwiseAbs().sum();
}

double brute_force_K(const EnergyModel& model, const BinaryDataset& data, const ParamVector& theta,
                     double flow_time, FlowMode mode) {
  if (data.dim() != model.dim()) throw InvalidArgument("dataset dimension does not match model dimension");
  const TransitionMatrix gamma = build_transition_matrix(model, theta, Connectivity::bit_flip);
  const Eigen::VectorXd counts = state_counts(data);
  const auto n = gamma.entries.rows();
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (counts[j] == 0.0) continue;
    double flow = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j || gamma.connectivity(i, j) == 0.0) continue;
      if (mode == FlowMode::strict && counts[i] > 0.0) continue;
      flow += gamma.entries(i, j);
    }
    total += counts[j] * flow;
  }
  return flow_time / static_cast<double>(data.size()) * total;
}

TaylorCheck taylor_check(const EnergyModel& model, const BinaryDataset& data, const ParamVector& theta,
                         const std::vector<double>& flow_times) {
  if (flow_times.size() < 2) throw InvalidArgument("taylor check needs at least two flow times");
  const TransitionMatrix gamma = build_transition_matrix(model, theta, Connectivity::bit_flip);
  const DistributionVector p0 = empirical_distribution(data);

  TaylorCheck out;
  out.flow_times = flow_times;
  for (double eps : flow_times) {
    const DistributionVector pe = evolve(p0, gamma, eps);
    out.ratios.push_back(exact_kl(p0, pe) / eps);
  }
  // Least-squares line through (ε, ratio); its intercept is the t = 0 rate.
  const auto m = static_cast<double>(flow_times.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < flow_times.size(); ++i) {
    sx += flow_times[i];
    sy += out.ratios[i];
    sxx += flow_times[i] * flow_times[i];
    sxy += flow_times[i] * out.ratios[i];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  out.slope_at_zero = (sy - slope * sx) / m;
  out.strict_K = brute_force_K(model, data, theta, 1.0, FlowMode::strict);
  out.relative_error = out.strict_K == 0.0 ? std::abs(out.slope_at_zero)
                                           : std::abs(out.slope_at_zero - out.strict_K) / out.strict_K;
  return out;
}

Eigen::MatrixXd numerical_hessian_of_K(const EnergyModel& model, const BinaryDataset& data, const ParamVector& theta,
                                       double h, const FitConfig& cfg) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  ModelPtr handle(std::shared_ptr<const EnergyModel>{}, &model);
  const DiscreteMpfObjective objective(handle, data, cfg);
  const auto n = static_cast<Eigen::Index>(theta.size());
  Eigen::MatrixXd hess(n, n);
  ParamVector probe = theta;
  for (Eigen::Index m = 0; m < n; ++m) {
    const double orig = probe.values()[m];
    probe.values()[m] = orig + h;
    const Eigen::VectorXd gp = objective.evaluate(probe).gradient.values();
    probe.values()[m] = orig - h;
    const Eigen::VectorXd gm = objective.evaluate(probe).gradient.values();
    probe.values()[m] = orig;
    hess.col(m) = (gp - gm) / (2.0 * h);
  }
  return 0.5 * (hess + hess.transpose());
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("eigen-solve failed", {});
  return solver.eigenvalues().minCoeff();
}

LikelihoodReport exact_negative_log_likelihood(const EnergyModel& model, const BinaryDataset& data,
                                               const ParamVector& theta) {
  if (data.dim() != model.dim()) throw InvalidArgument("dataset dimension does not match model dimension");
  const Eigen::VectorXd e = all_energies(model, theta);
  const double log_z = log_sum_exp(-e);
  const std::size_t d = model.dim();

  LikelihoodReport out;
  out.gradient = theta.zeros_like();
  const double inv_n = 1.0 / static_cast<double>(data.size());
  const auto& rows = data.distinct_rows();
  const auto& counts = data.distinct_counts();
  double data_energy = 0.0;
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const Eigen::VectorXd x = rows.row(r).transpose();
    data_energy += counts[r] * model.energy(x, theta);
    model.accumulate_param_gradient(x, theta, counts[r] * inv_n, out.gradient.values());
  }
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const double p = std::exp(-e[i] - log_z);
    model.accumulate_param_gradient(state_vector(static_cast<std::size_t>(i), d), theta, -p, out.gradient.values());
  }
  out.value = data_energy * inv_n + log_z;
  return out;
}

}  // namespace mpf::oracle
