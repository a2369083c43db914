#include "commands.hpp"
#include "mpf_cli/cli.hpp"
#include "mpf_cli/manifest.hpp"
#include "util.hpp"

#include "mpf/error.hpp"
#include "mpf/fit.hpp"
#include "mpf/model_io.hpp"
#include "mpf/trace_io.hpp"

#include <ostream>

namespace mpf::cli {

namespace {

bool is_continuous_kind(const std::string& kind) { return kind == "product_of_t" || kind == "gaussian_toy"; }

std::string trace_prefix(const FitOptions& o) {
  if (!o.trace.empty()) return o.trace;
  std::filesystem::path p(o.out);
  p.replace_extension();
  return p.string() + ".trace";
}

}  // namespace

int cmd_fit(const FitOptions& o, std::ostream& out) {
  RunManifest manifest("fit");
  Stopwatch total;
  const bool continuous = is_continuous_kind(o.kind);

  Stopwatch loading;
  Dataset dataset = read_dataset(o.data, continuous ? DatasetKind::continuous : DatasetKind::binary);
  manifest.add_input(o.data);
  const std::size_t d = std::visit([](const auto& ds) { return ds.dim(); }, dataset);
  if (o.d && *o.d != d) {
    throw InvalidArgument("dataset has d=" + std::to_string(d) + " but --d is " + std::to_string(*o.d));
  }
  if (o.kind == "rbm_marginal" && o.d_hid == 0) throw InvalidArgument("rbm_marginal needs --d-hid");
  if (o.kind == "product_of_t" && o.n_filters == 0) throw InvalidArgument("product_of_t needs --n-filters");
  const std::size_t extra = o.kind == "rbm_marginal" ? o.d_hid : o.n_filters;
  ModelPtr model = make_model(o.kind, d, extra);

  ParamVector theta0 = default_initial_params(*model, o.seed);
  if (!o.init.empty()) {
    ModelWithParams init = load_model(o.init);
    manifest.add_input(o.init);
    if (init.model->kind() != model->kind() || !(init.params.layout() == model->layout())) {
      throw InvalidArgument("--init model does not match the requested kind and shape");
    }
    theta0 = init.params;
  }
  manifest.record_timing("load", loading.ms());

  OptimizerConfig opt;
  opt.max_iterations = o.max_iter;
  opt.gradient_norm_tolerance = o.grad_tol;
  opt.relative_value_tolerance = o.value_tol;
  opt.history_size = o.history;

  FitConfig fcfg;
  fcfg.mode = parse_flow_mode(o.mode);
  fcfg.flow_time = o.eps;
  fcfg.stabilization = o.stabilization == "log-sum-exp" ? Stabilization::log_sum_exp : Stabilization::clamp;
  fcfg.clamp_cap = o.clamp_cap;
  fcfg.threads = o.threads;
  fcfg.validate();

  NeighborConfig ncfg;
  ncfg.n_neighbors = o.neighbors;
  ncfg.noise_scale = o.noise_scale;
  ncfg.rescale_to_input_norm = !o.no_rescale;
  ncfg.hastings_correction = o.hastings;
  ncfg.symmetric_pairs = o.symmetric_pairs;
  ncfg.seed = o.seed;

  Stopwatch fitting;
  MinimizeResult result;
  if (o.objective == "exact-ml") {
    if (continuous) throw UnsupportedCapability("exact-ml needs a binary model");
    result = fit_exact_ml(*model, std::get<BinaryDataset>(dataset), theta0, opt);
  } else if (o.objective == "score-matching") {
    if (!continuous) throw UnsupportedCapability("score-matching needs a continuous model");
    result = fit_score_matching(*model, std::get<ContinuousDataset>(dataset), theta0, opt, o.threads);
  } else if (continuous) {
    const auto schedule = o.schedule == "stochastic" ? NeighborSchedule::stochastic : NeighborSchedule::frozen;
    result = fit_continuous(model, std::get<ContinuousDataset>(dataset), ncfg, theta0, opt, o.eps, schedule,
                            o.threads);
  } else {
    DiscreteMpfObjective objective(model, std::get<BinaryDataset>(dataset), fcfg);
    result = fit_discrete(objective, theta0, opt);
  }
  manifest.record_timing("fit", fitting.ms());

  save_model(o.out, *model, result.theta);
  manifest.add_output(o.out);
  const std::string prefix = trace_prefix(o);
  write_trace_csv(prefix + ".csv", result.trace);
  write_trace_jsonl(prefix + ".jsonl", result.trace);
  manifest.add_output(prefix + ".csv");
  manifest.add_output(prefix + ".jsonl");

  const int code = result.trace.converged() ? kExitOk : kExitNotConverged;
  manifest.config() = {{"kind", o.kind},
                       {"data", o.data},
                       {"out", o.out},
                       {"d", d},
                       {"d_hid", o.d_hid},
                       {"n_filters", o.n_filters},
                       {"objective", o.objective},
                       {"mode", to_string(fcfg.mode)},
                       {"eps", o.eps},
                       {"stabilization", o.stabilization},
                       {"clamp_cap", o.clamp_cap},
                       {"seed", o.seed},
                       {"neighbors", o.neighbors},
                       {"noise_scale", o.noise_scale},
                       {"rescale_to_input_norm", !o.no_rescale},
                       {"hastings_correction", o.hastings},
                       {"symmetric_pairs", o.symmetric_pairs},
                       {"schedule", o.schedule},
                       {"max_iter", o.max_iter},
                       {"grad_tol", o.grad_tol},
                       {"value_tol", o.value_tol},
                       {"history", o.history},
                       {"init", o.init},
                       {"threads", o.threads}};
  manifest.config()["result"] = {{"termination", to_string(result.trace.reason)},
                                 {"iterations", result.trace.records.back().iteration},
                                 {"value", result.value},
                                 {"grad_norm", result.gradient.norm()}};
  manifest.record_timing("total", total.ms());
  manifest.write(manifest_path(o.manifest, o.out, "fit"), code);

  out << to_string(result.trace.reason) << " after " << result.trace.records.back().iteration
      << " iterations: value " << result.value << ", gradient norm " << result.gradient.norm() << '\n';
  return code;
}

}  // namespace mpf::cli
