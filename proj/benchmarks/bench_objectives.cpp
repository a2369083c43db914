#include "mpf/continuous_mpf.hpp"
#include "mpf/discrete_mpf.hpp"
#include "mpf/fit.hpp"
#include "mpf/models.hpp"
#include "mpf/sampler.hpp"
#include "mpf/score_matching.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

mpf::BinaryDataset ising_samples(std::size_t d, std::size_t n) {
  const mpf::ModelWithParams truth = mpf::random_coupling(d, 0.04, 1);
  mpf::SamplerConfig cfg;
  cfg.n_samples = n;
  cfg.seed = 1;
  return mpf::gibbs_sample_ising(dynamic_cast<const mpf::IsingModel&>(*truth.model), truth.params, cfg);
}

mpf::ContinuousDataset gaussian_rows(std::size_t d, std::size_t n) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < rows.size(); ++i) rows.data()[i] = normal(rng);
  return mpf::ContinuousDataset(rows);
}

void BM_IsingObjective(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto threads = static_cast<unsigned>(state.range(1));
  auto model = std::make_shared<mpf::IsingModel>(d);
  mpf::FitConfig cfg;
  cfg.threads = threads;
  const mpf::DiscreteMpfObjective obj(model, ising_samples(d, 20000), cfg);
  const mpf::ParamVector theta(model->layout());
  for (auto _ : state) benchmark::DoNotOptimize(obj.evaluate(theta).value);
}
BENCHMARK(BM_IsingObjective)->Args({10, 1})->Args({40, 1})->Args({40, 4})->Unit(benchmark::kMillisecond);

void BM_RbmObjective(benchmark::State& state) {
  auto model = std::make_shared<mpf::RbmMarginalModel>(20, 10);
  const mpf::DiscreteMpfObjective obj(model, ising_samples(20, 10000));
  const mpf::ParamVector theta = mpf::default_initial_params(*model, 3);
  for (auto _ : state) benchmark::DoNotOptimize(obj.evaluate(theta).value);
}
BENCHMARK(BM_RbmObjective)->Unit(benchmark::kMillisecond);

void BM_PotContinuousObjective(benchmark::State& state) {
  auto model = std::make_shared<mpf::PotModel>(16, 16);
  mpf::NeighborConfig cfg;
  cfg.n_neighbors = 4;
  const mpf::ContinuousMpfObjective obj(model, gaussian_rows(16, 5000), cfg);
  const mpf::ParamVector theta = mpf::default_initial_params(*model, 4);
  for (auto _ : state) benchmark::DoNotOptimize(obj.evaluate(theta).value);
}
BENCHMARK(BM_PotContinuousObjective)->Unit(benchmark::kMillisecond);

void BM_PotScoreMatching(benchmark::State& state) {
  mpf::PotModel model(16, 16);
  const mpf::ContinuousDataset data = gaussian_rows(16, 5000);
  const mpf::ParamVector theta = mpf::default_initial_params(model, 4);
  for (auto _ : state) benchmark::DoNotOptimize(mpf::score_matching_objective(model, data, theta).value);
}
BENCHMARK(BM_PotScoreMatching)->Unit(benchmark::kMillisecond);

void BM_IsingFit10(benchmark::State& state) {
  auto model = std::make_shared<mpf::IsingModel>(10);
  const mpf::DiscreteMpfObjective obj(model, ising_samples(10, 20000));
  for (auto _ : state) benchmark::DoNotOptimize(mpf::fit_discrete(obj, mpf::ParamVector(model->layout())).value);
}
BENCHMARK(BM_IsingFit10)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
