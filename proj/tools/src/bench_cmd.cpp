#include "commands.hpp"
#include "mpf_cli/cli.hpp"
#include "mpf_cli/manifest.hpp"
#include "util.hpp"

#include "mpf/atomic_write.hpp"
#include "mpf/fit.hpp"
#include "mpf/metrics.hpp"
#include "mpf/model_io.hpp"
#include "mpf/sampler.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace mpf::cli {

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  RunManifest manifest("bench");
  Stopwatch total;
  const unsigned threads = o.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : o.threads;

  Stopwatch gen_clock;
  const ModelWithParams truth = random_coupling(o.d, o.variance, o.seed);
  SamplerConfig scfg;
  scfg.n_samples = o.n_samples;
  scfg.seed = o.seed;
  const auto& ising = dynamic_cast<const IsingModel&>(*truth.model);
  const BinaryDataset data = gibbs_sample_ising(ising, truth.params, scfg);
  const double gen_ms = gen_clock.ms();

  Stopwatch fit_clock;
  FitConfig fcfg;
  fcfg.threads = threads;
  const DiscreteMpfObjective objective(truth.model, data, fcfg);
  const MinimizeResult fit = fit_discrete(objective, default_initial_params(*truth.model), {});
  const double fit_ms = fit_clock.ms();

  Stopwatch eval_clock;
  SamplerConfig ecfg;
  ecfg.n_samples = o.n_samples;
  ecfg.seed = o.seed + 1;
  const Moments fitted = ising_moments(ising, fit.theta, ecfg);
  ecfg.seed = o.seed + 2;
  const Moments reference = ising_moments(ising, truth.params, ecfg);
  const CorrelationErrors errors = correlation_errors(fitted, reference);
  const double coupling = coupling_error(fit.theta.block("J"), truth.params.block("J"));
  const double eval_ms = eval_clock.ms();

  if (!o.workdir.empty()) {
    const std::filesystem::path dir(o.workdir);
    std::filesystem::create_directories(dir);
    save_model(dir / "truth.json", *truth.model, truth.params);
    write_dataset(dir / "data.mpfd", data, Encoding::bit_packed);
    save_model(dir / "fit.json", *truth.model, fit.theta);
    for (const char* name : {"truth.json", "data.mpfd", "fit.json"}) manifest.add_output(dir / name);
  }

  std::ostringstream csv;
  csv << "# format_version: 1\n" << "phase,seconds\n" << std::setprecision(6);
  csv << "generate," << gen_ms / 1000.0 << '\n';
  csv << "fit," << fit_ms / 1000.0 << '\n';
  csv << "eval," << eval_ms / 1000.0 << '\n';
  csv << "total," << total.ms() / 1000.0 << '\n';
  if (o.out.empty()) {
    out << csv.str();
  } else {
    write_file_atomically(o.out, csv.str());
    manifest.add_output(o.out);
  }

  const int code = fit.trace.converged() ? kExitOk : kExitNotConverged;
  manifest.config() = {{"d", o.d},         {"n_samples", o.n_samples}, {"variance", o.variance},
                       {"seed", o.seed},   {"threads", threads},       {"out", o.out},
                       {"workdir", o.workdir}};
  manifest.config()["result"] = {{"termination", to_string(fit.trace.reason)},
                                 {"iterations", fit.trace.records.back().iteration},
                                 {"value", fit.value},
                                 {"grad_norm", fit.gradient.norm()},
                                 {"second_moment_mae_offdiag", errors.second_moment_offdiag},
                                 {"covariance_mae_offdiag", errors.covariance_offdiag},
                                 {"coupling_mae_symmetrized", coupling},
                                 {"moments_path", fitted.exact ? "exact" : "gibbs"}};
  manifest.record_timing("generate", gen_ms);
  manifest.record_timing("fit", fit_ms);
  manifest.record_timing("eval", eval_ms);
  manifest.record_timing("total", total.ms());
  manifest.write(manifest_path(o.manifest, o.out, "bench"), code);
  return code;
}

}  // namespace mpf::cli
