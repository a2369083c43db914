// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// gated criterion fails.

#include "mpf/continuous_mpf.hpp"
#include "mpf/discrete_mpf.hpp"
#include "mpf/fit.hpp"
#include "mpf/metrics.hpp"
#include "mpf/models.hpp"
#include "mpf/oracle.hpp"
#include "mpf/sampler.hpp"
#include "mpf/score_matching.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

using namespace mpf;
namespace o = mpf::oracle;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

int g_failures = 0;

void report(int id, const std::string& name, const Outcome& r, bool gated = true) {
  std::printf("%s criterion %d %s: %s%s\n", r.passed ? "PASS" : "FAIL", id, name.c_str(), r.detail.c_str(),
              gated ? "" : " [recorded, not gated]");
  std::fflush(stdout);
  if (gated && !r.passed) ++g_failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Eigen::VectorXd gaussian_vector(Eigen::Index n, std::mt19937_64& rng, double sd) {
  std::normal_distribution<double> normal(0.0, sd);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

ParamVector gaussian_params(const EnergyModel& m, std::mt19937_64& rng, double sd) {
  return ParamVector(m.layout(), gaussian_vector(static_cast<Eigen::Index>(m.layout().total_size()), rng, sd));
}

BinaryDataset random_bits(std::size_t d, std::size_t n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<std::uint8_t> bits(d * n);
  for (auto& b : bits) b = coin(rng) ? 1 : 0;
  return BinaryDataset(d, std::move(bits));
}

Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                   double h) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd p = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    p[i] = x[i] + h;
    const double up = f(p);
    p[i] = x[i] - h;
    const double down = f(p);
    p[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-8);
}

struct Fixture {
  std::shared_ptr<IsingModel> model;
  ParamVector theta;
  BinaryDataset data;
};

/// 25 Ising fixtures, d ∈ {3..8}, |D| ∈ {1..32}.
std::vector<Fixture> ising_fixtures(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> dim(3, 8);
  std::uniform_int_distribution<std::size_t> size(1, 32);
  std::vector<Fixture> out;
  for (int k = 0; k < 25; ++k) {
    const std::size_t d = dim(rng);
    auto m = std::make_shared<IsingModel>(d);
    ParamVector theta = gaussian_params(*m, rng, 0.5);
    out.push_back({m, std::move(theta), random_bits(d, size(rng), rng)});
  }
  return out;
}

Outcome criterion_oracle_equivalence(const std::vector<Fixture>& fixtures) {
  const auto start = Clock::now();
  double worst = 0.0;
  for (const auto& f : fixtures) {
    for (FlowMode mode : {FlowMode::full_neighbor, FlowMode::strict}) {
      FitConfig cfg;
      cfg.mode = mode;
      const double sparse = mpf_objective(*f.model, f.data, f.theta, cfg).value;
      const double dense = o::brute_force_K(*f.model, f.data, f.theta, 1.0, mode);
      const double err = sparse == dense ? 0.0 : std::abs(sparse - dense) / std::abs(dense);
      worst = std::max(worst, err);
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-12 && elapsed < 10.0,
          fmt("max relative error %.3g (tol 1e-12) over 25 fixtures x 2 modes, %.2f s (limit 10 s)", worst, elapsed)};
}

Outcome criterion_gradients() {
  std::mt19937_64 rng(2024);
  const double h = 1e-5;
  double worst_discrete = 0.0;
  double worst_continuous = 0.0;
  double worst_sm = 0.0;
  std::uniform_int_distribution<std::size_t> dim(2, 8);
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = dim(rng);
    ModelPtr m = k % 2 == 0 ? ModelPtr(std::make_shared<IsingModel>(d))
                            : ModelPtr(std::make_shared<RbmMarginalModel>(d, 1 + k % 4));
    const ParamVector theta = gaussian_params(*m, rng, 0.5);
    FitConfig cfg;
    cfg.mode = k % 3 == 0 ? FlowMode::strict : FlowMode::full_neighbor;
    const BinaryDataset data = random_bits(d, 1 + k % 20, rng);
    const DiscreteMpfObjective obj(m, data, cfg);
    const auto f = [&](const Eigen::VectorXd& v) { return obj.value(ParamVector(m->layout(), v)); };
    const ObjectiveReport r = obj.evaluate(theta);
    // The strict objective is identically zero when every neighbour is observed.
    if (r.gradient.values().norm() == 0.0 && r.value == 0.0) continue;
    worst_discrete = std::max(worst_discrete, rel_err(r.gradient.values(), central_difference(f, theta.values(), h)));
  }
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 1 + k % 4;
    ModelPtr m = k % 4 == 0 ? ModelPtr(std::make_shared<GaussianToyModel>(d))
                            : ModelPtr(std::make_shared<PotModel>(d, 1 + k % 3));
    ParamVector theta = gaussian_params(*m, rng, 0.5);
    if (m->kind() == "gaussian_toy") theta.values().array() = theta.values().array().abs() + 0.5;
    Eigen::MatrixXd rows(20, static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < rows.rows(); ++i) rows.row(i) = gaussian_vector(rows.cols(), rng, 1.0).transpose();
    const ContinuousDataset data(rows);

    NeighborConfig ncfg;
    ncfg.n_neighbors = 3;
    ncfg.noise_scale = 0.3;
    ncfg.rescale_to_input_norm = d > 1;
    ncfg.seed = static_cast<std::uint64_t>(k);
    const ContinuousMpfObjective cobj(m, data, ncfg);
    const auto fc = [&](const Eigen::VectorXd& v) { return cobj.evaluate(ParamVector(m->layout(), v)).value; };
    worst_continuous = std::max(
        worst_continuous, rel_err(cobj.evaluate(theta).gradient.values(), central_difference(fc, theta.values(), h)));

    const auto fs = [&](const Eigen::VectorXd& v) {
      return score_matching_objective(*m, data, ParamVector(m->layout(), v)).value;
    };
    worst_sm = std::max(worst_sm, rel_err(score_matching_objective(*m, data, theta).gradient.values(),
                                          central_difference(fs, theta.values(), h)));
  }
  const double worst = std::max({worst_discrete, worst_continuous, worst_sm});
  return {worst <= 1e-5, fmt("max relative error: discrete MPF %.3g, continuous MPF %.3g, score matching %.3g "
                             "(tol 1e-5, 100 instances each)",
                             worst_discrete, worst_continuous, worst_sm)};
}

Outcome criterion_taylor() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  int checked = 0;
  for (std::size_t d = 2; d <= 6; ++d) {
    for (int k = 0; k < 4; ++k) {
      IsingModel m(d);
      const ParamVector theta = gaussian_params(m, rng, 0.5);
      const BinaryDataset data = random_bits(d, 1 + static_cast<std::size_t>(k) * d, rng);
      const o::TaylorCheck t = o::taylor_check(m, data, theta, {1e-3, 1e-4, 1e-5});
      if (t.strict_K == 0.0) continue;
      worst = std::max(worst, t.relative_error);
      ++checked;
    }
  }
  return {worst <= 1e-2 && checked > 0,
          fmt("max |slope - K_strict| / K_strict = %.3g (tol 1e-2) on %d fixtures with d in 2..6", worst, checked)};
}

Outcome criterion_dynamics(const std::vector<Fixture>& fixtures) {
  double worst_col = 0.0;
  double worst_db = 0.0;
  double worst_tv = 0.0;
  const double t_large = 1000.0;
  for (const auto& f : fixtures) {
    const o::TransitionMatrix g = o::build_transition_matrix(*f.model, f.theta);
    const o::DistributionVector target = o::exact_model_distribution(*f.model, f.theta);
    worst_col = std::max(worst_col, o::max_column_sum(g));
    worst_db = std::max(worst_db, o::check_detailed_balance(g, target));
    o::DistributionVector p0{f.model->dim(), Eigen::VectorXd::Zero(target.probs.size())};
    p0.probs[static_cast<Eigen::Index>(f.data.state(0).index())] = 1.0;
    worst_tv = std::max(worst_tv, 0.5 * o::l1_distance(o::evolve(p0, g, t_large), target));
  }
  return {worst_col <= 1e-12 && worst_db <= 1e-12 && worst_tv <= 1e-8,
          fmt("max |column sum| %.3g, max detailed-balance violation %.3g (tol 1e-12), "
              "TV(evolve(t=%.0f), p_inf) %.3g (tol 1e-8) on 25 fixtures",
              worst_col, worst_db, t_large, worst_tv)};
}

Outcome criterion_convexity() {
  std::mt19937_64 rng(55);
  double min_eig = std::numeric_limits<double>::infinity();
  double worst_spread = 0.0;
  for (int k = 0; k < 20; ++k) {
    auto m = std::make_shared<IsingModel>(6);
    const ParamVector theta = gaussian_params(*m, rng, 0.5);
    const BinaryDataset data = random_bits(6, 40, rng);
    min_eig = std::min(min_eig, o::min_eigenvalue(o::numerical_hessian_of_K(*m, data, theta)));

    const DiscreteMpfObjective obj(m, data);
    std::vector<double> values;
    for (int s = 0; s < 5; ++s) values.push_back(fit_discrete(obj, gaussian_params(*m, rng, 1.0)).value);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    worst_spread = std::max(worst_spread, (*hi - *lo) / std::abs(*lo));
  }
  return {min_eig >= -1e-6 && worst_spread <= 1e-6,
          fmt("min Hessian eigenvalue %.3g (tol -1e-6) on 20 six-unit instances; optimum spread over 5 starts "
              "%.3g relative (tol 1e-6)",
              min_eig, worst_spread)};
}

double second_moment_mae(const EnergyModel& m, const ParamVector& fitted, const Moments& truth) {
  return correlation_errors(exact_moments(m, fitted), truth).second_moment_offdiag;
}

Outcome criterion_recovery() {
  const std::size_t d = 10;
  const ModelWithParams truth = random_coupling(d, 0.04, 6);
  const auto& ising = dynamic_cast<const IsingModel&>(*truth.model);
  const Moments truth_moments = exact_moments(ising, truth.params);
  auto model = std::make_shared<IsingModel>(d);

  const auto fit_pair = [&](std::size_t n, std::uint64_t seed, double& mpf_mae, double& ml_mae, double& cov_mpf,
                            double& cov_ml) {
    SamplerConfig cfg;
    cfg.n_samples = n;
    cfg.seed = seed;
    const BinaryDataset data = gibbs_sample_ising(ising, truth.params, cfg);
    FitConfig fcfg;
    fcfg.threads = std::max(1u, std::thread::hardware_concurrency());
    const MinimizeResult mpf = fit_discrete(DiscreteMpfObjective(model, data, fcfg), ParamVector(model->layout()));
    const MinimizeResult ml = fit_exact_ml(*model, data, ParamVector(model->layout()));
    mpf_mae = second_moment_mae(*model, mpf.theta, truth_moments);
    ml_mae = second_moment_mae(*model, ml.theta, truth_moments);
    cov_mpf = correlation_errors(exact_moments(*model, mpf.theta), truth_moments).covariance_offdiag;
    cov_ml = correlation_errors(exact_moments(*model, ml.theta), truth_moments).covariance_offdiag;
  };
  double mpf20 = 0, ml20 = 0, cmpf20 = 0, cml20 = 0;
  double mpf200 = 0, ml200 = 0, cmpf200 = 0, cml200 = 0;
  fit_pair(20000, 61, mpf20, ml20, cmpf20, cml20);
  fit_pair(200000, 62, mpf200, ml200, cmpf200, cml200);
  const bool ratio_ok = mpf20 <= 1.5 * ml20;
  const bool decreases = mpf200 < mpf20;
  return {ratio_ok && decreases,
          fmt("second-moment MAE (off-diagonal): MPF %.4g vs ML %.4g (ratio %.3f, limit 1.5) at 20k samples; "
              "MPF %.4g at 200k (must decrease); covariance MAE MPF %.4g / ML %.4g at 20k, %.4g / %.4g at 200k",
              mpf20, ml20, mpf20 / ml20, mpf200, cmpf20, cml20, cmpf200, cml200)};
}

Outcome criterion_timing() {
  const std::size_t d = 40;
  const ModelWithParams truth = random_coupling(d, 0.04, 1);
  SamplerConfig cfg;
  cfg.n_samples = 20000;
  cfg.seed = 1;
  const BinaryDataset data = gibbs_sample_ising(dynamic_cast<const IsingModel&>(*truth.model), truth.params, cfg);
  auto model = std::make_shared<IsingModel>(d);
  FitConfig fcfg;
  fcfg.threads = std::max(1u, std::thread::hardware_concurrency());
  const auto start = Clock::now();
  const MinimizeResult r = fit_discrete(DiscreteMpfObjective(model, data, fcfg), ParamVector(model->layout()));
  const double elapsed = seconds_since(start);
  return {elapsed < 60.0 && r.trace.converged(),
          fmt("40-unit, 20000-sample fit took %.2f s on %u threads (limit 60 s), %s after %zu iterations", elapsed,
              fcfg.threads, to_string(r.trace.reason).c_str(), r.trace.records.back().iteration)};
}

/// Minimizer of a unimodal function by repeated grid refinement.
double grid_search(const std::function<double(double)>& f, double lo, double hi) {
  for (int round = 0; round < 12; ++round) {
    const int n = 200;
    double best = lo;
    double best_value = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
      const double t = lo + (hi - lo) * k / n;
      const double v = f(t);
      if (v < best_value) {
        best_value = v;
        best = t;
      }
    }
    const double step = (hi - lo) / n;
    lo = best - step;
    hi = best + step;
  }
  return 0.5 * (lo + hi);
}

Outcome criterion_score_matching() {
  std::mt19937_64 rng(8);
  const Eigen::Index n = 1000;
  Eigen::MatrixXd rows(n, 1);
  rows.col(0) = gaussian_vector(n, rng, 1.0);
  const ContinuousDataset data(rows);
  auto model = std::make_shared<GaussianToyModel>(1);

  const double closed = static_cast<double>(n) / rows.col(0).squaredNorm();
  const double grid = grid_search(
      [&](double t) { return score_matching_objective(*model, data, model->make_params(t)).value; }, 0.01, 10.0);
  const double fitted = fit_score_matching(*model, data, model->make_params(1.0)).theta.values()[0];
  const double sm_err = std::max(std::abs(grid - closed), std::abs(fitted - closed));

  // Seeds are shared across noise scales, so each seed sees the same
  // standard-normal draws scaled by σ.
  const std::vector<double> scales = {0.1, 0.05, 0.025};
  std::vector<double> mean_abs;
  std::vector<double> mean_signed;
  for (double sigma : scales) {
    double abs_sum = 0.0;
    double signed_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      NeighborConfig cfg;
      cfg.n_neighbors = 100;
      cfg.noise_scale = sigma;
      cfg.rescale_to_input_norm = false;
      cfg.symmetric_pairs = true;
      cfg.seed = seed;
      const double t = fit_continuous(model, data, cfg, model->make_params(1.0)).theta.values()[0];
      abs_sum += std::abs(t - closed);
      signed_sum += t - closed;
    }
    mean_abs.push_back(abs_sum / 10.0);
    mean_signed.push_back(signed_sum / 10.0);
  }
  const bool monotone = mean_abs[1] < mean_abs[0] && mean_abs[2] < mean_abs[1];
  return {sm_err <= 1e-6 && monotone,
          fmt("SM theta %.10f vs n/sum(x^2) %.10f, max deviation (grid search, L-BFGS) %.3g (tol 1e-6); "
              "mean |theta_MPF - theta_SM| over 10 seeds for sigma 0.1/0.05/0.025: %.4g / %.4g / %.4g "
              "(mean signed %.3g / %.3g / %.3g), must decrease",
              fitted, closed, sm_err, mean_abs[0], mean_abs[1], mean_abs[2], mean_signed[0], mean_signed[1],
              mean_signed[2])};
}

double visible_kl(const o::DistributionVector& truth, const EnergyModel& m, const ParamVector& theta) {
  return o::exact_kl(truth, o::exact_model_distribution(m, theta));
}

Outcome criterion_rbm() {
  auto model = std::make_shared<RbmMarginalModel>(6, 3);
  std::mt19937_64 rng(9);
  const ParamVector truth = gaussian_params(*model, rng, 2.0);
  SamplerConfig cfg;
  cfg.n_samples = 10000;
  cfg.seed = 9;
  const BinaryDataset data = gibbs_sample_rbm(*model, truth, cfg);
  const o::DistributionVector p_truth = o::exact_model_distribution(*model, truth);

  const double kl_zero = visible_kl(p_truth, *model, ParamVector(model->layout()));
  const MinimizeResult mpf = fit_discrete(DiscreteMpfObjective(model, data), default_initial_params(*model, 9));
  const double kl_mpf = visible_kl(p_truth, *model, mpf.theta);

  // CD-1 baseline: full-batch gradient descent from the same start.
  ParamVector theta = default_initial_params(*model, 9);
  Rng cd_rng(9);
  const double rate = 0.05;
  for (int step = 0; step < 2000; ++step) {
    theta.values() -= rate * cd1_gradient(*model, theta, data, cd_rng).values();
  }
  const double kl_cd = visible_kl(p_truth, *model, theta);
  const double reduction = 1.0 - kl_mpf / kl_zero;
  return {reduction >= 0.5,
          fmt("KL(truth || model): theta=0 %.4f, MPF %.4f (%.1f%% reduction, need >= 50%%, %s), CD-1 %.4f "
              "(%.1f%% reduction, 2000 full-batch steps, rate %.2f)",
              kl_zero, kl_mpf, 100.0 * reduction, to_string(mpf.trace.reason).c_str(), kl_cd,
              100.0 * (1.0 - kl_cd / kl_zero), rate)};
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const std::vector<Fixture> fixtures = ising_fixtures(1);
  report(1, "oracle-equivalence", criterion_oracle_equivalence(fixtures));
  report(2, "gradient-correctness", criterion_gradients());
  report(3, "taylor-identity", criterion_taylor());
  report(4, "dynamics", criterion_dynamics(fixtures));
  report(5, "convexity", criterion_convexity());
  report(6, "ising-recovery", criterion_recovery());
  report(7, "wall-clock", criterion_timing(), false);
  report(8, "score-matching-reduction", criterion_score_matching());
  report(9, "rbm-training", criterion_rbm());
  std::printf("%d gated criteria failed; total %.1f s\n", g_failures, seconds_since(start));
  return g_failures == 0 ? 0 : 1;
}
