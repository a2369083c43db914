#include "commands.hpp"
#include "mpf_cli/cli.hpp"
#include "mpf_cli/manifest.hpp"
#include "util.hpp"

#include "mpf/atomic_write.hpp"
#include "mpf/continuous_mpf.hpp"
#include "mpf/discrete_mpf.hpp"
#include "mpf/error.hpp"
#include "mpf/metrics.hpp"
#include "mpf/model_io.hpp"
#include "mpf/oracle.hpp"
#include "mpf/score_matching.hpp"

#include <ostream>

namespace mpf::cli {

namespace {

nlohmann::json moments_json(const Moments& m) {
  return {{"mean", vector_json(m.mean)},
          {"second_moment", matrix_json(m.second)},
          {"covariance", matrix_json(m.covariance)}};
}

nlohmann::json errors_json(const CorrelationErrors& e) {
  return {{"second_moment_offdiag", e.second_moment_offdiag},
          {"second_moment_full", e.second_moment_full},
          {"covariance_offdiag", e.covariance_offdiag},
          {"covariance_full", e.covariance_full}};
}

Moments model_moments(const ModelWithParams& mp, const EvalOptions& o, std::uint64_t seed) {
  if (mp.model->dim() <= o.max_exact_bits) return exact_moments(*mp.model, mp.params);
  SamplerConfig cfg;
  cfg.n_samples = o.samples;
  cfg.seed = seed;
  if (const auto* ising = dynamic_cast<const IsingModel*>(mp.model.get())) {
    return sample_moments(gibbs_sample_ising(*ising, mp.params, cfg));
  }
  if (const auto* rbm = dynamic_cast<const RbmMarginalModel*>(mp.model.get())) {
    return sample_moments(gibbs_sample_rbm(*rbm, mp.params, cfg));
  }
  throw UnsupportedCapability(mp.model->kind() + ": no sampler for moments");
}

nlohmann::json against_truth(const ModelWithParams& fitted, const ModelWithParams& truth, const EvalOptions& o) {
  if (fitted.model->dim() != truth.model->dim()) throw InvalidArgument("model and truth dimensions differ");
  if (!fitted.model->is_discrete() || !truth.model->is_discrete()) {
    throw UnsupportedCapability("truth comparison needs binary models");
  }
  nlohmann::json j;
  const Moments mf = model_moments(fitted, o, o.seed);
  const Moments mt = model_moments(truth, o, o.seed + 1);
  const bool exact = mf.exact && mt.exact;
  j["moments_path"] = exact ? "exact" : "gibbs";
  if (!exact) {
    j["gibbs_samples"] = o.samples;
    j["monte_carlo_error_max"] = std::max(mf.standard_error.maxCoeff(), mt.standard_error.maxCoeff());
  }
  j["correlation_mae"] = errors_json(correlation_errors(mf, mt));
  j["fitted_moments"] = moments_json(mf);
  j["truth_moments"] = moments_json(mt);
  if (fitted.model->kind() == "ising" && truth.model->kind() == "ising") {
    j["coupling_mae_symmetrized"] = coupling_error(fitted.params.block("J"), truth.params.block("J"));
  }
  if (fitted.model->dim() <= oracle::kMaxEnumerationBits && exact) {
    j["kl_truth_to_model"] = oracle::exact_kl(oracle::exact_model_distribution(*truth.model, truth.params),
                                              oracle::exact_model_distribution(*fitted.model, fitted.params));
  }
  return j;
}

nlohmann::json against_data(const ModelWithParams& mp, const Dataset& dataset, const EvalOptions& o) {
  nlohmann::json j;
  if (const auto* binary = std::get_if<BinaryDataset>(&dataset)) {
    if (!mp.model->is_discrete()) throw InvalidArgument("binary dataset given for a continuous model");
    j["n_samples"] = binary->size();
    j["mpf_full_neighbor"] = mpf_objective(*mp.model, *binary, mp.params, {}).value;
    FitConfig strict;
    strict.mode = FlowMode::strict;
    j["mpf_strict"] = mpf_objective(*mp.model, *binary, mp.params, strict).value;
    if (mp.model->dim() <= oracle::kMaxEnumerationBits) {
      j["negative_log_likelihood"] = oracle::exact_negative_log_likelihood(*mp.model, *binary, mp.params).value;
    }
    if (mp.model->dim() <= o.max_exact_bits) {
      const Moments mm = exact_moments(*mp.model, mp.params);
      const Moments md = sample_moments(*binary);
      j["correlation_mae"] = errors_json(correlation_errors(mm, md));
      j["model_moments"] = moments_json(mm);
      j["data_moments"] = moments_json(md);
    }
  } else {
    const auto& cont = std::get<ContinuousDataset>(dataset);
    if (mp.model->is_discrete()) throw InvalidArgument("continuous dataset given for a binary model");
    j["n_samples"] = cont.size();
    NeighborConfig cfg;
    cfg.seed = o.seed;
    j["mpf_sampled"] = mpf_objective_continuous(*mp.model, cont, mp.params, cfg).value;
    if (mp.model->has_state_derivatives()) {
      j["score_matching"] = score_matching_objective(*mp.model, cont, mp.params).value;
    }
  }
  return j;
}

}  // namespace

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  RunManifest manifest("eval");
  Stopwatch total;
  ModelWithParams mp = load_model(o.model);
  manifest.add_input(o.model);

  nlohmann::json report = {{"format_version", 1}, {"model_kind", mp.model->kind()}, {"d", mp.model->dim()}};
  if (!o.truth.empty()) {
    ModelWithParams truth = load_model(o.truth);
    manifest.add_input(o.truth);
    report["truth"] = against_truth(mp, truth, o);
  } else {
    const auto kind = mp.model->is_discrete() ? DatasetKind::binary : DatasetKind::continuous;
    Dataset data = read_dataset(o.data, kind);
    manifest.add_input(o.data);
    if (std::visit([](const auto& ds) { return ds.dim(); }, data) != mp.model->dim()) {
      throw InvalidArgument("dataset dimension does not match the model");
    }
    report["data"] = against_data(mp, data, o);
  }

  const std::string text = report.dump(2) + '\n';
  if (o.out.empty()) {
    out << text;
  } else {
    write_file_atomically(o.out, text);
    manifest.add_output(o.out);
  }
  manifest.config() = {{"model", o.model},        {"truth", o.truth}, {"data", o.data},
                       {"out", o.out},            {"samples", o.samples}, {"seed", o.seed},
                       {"max_exact_bits", o.max_exact_bits}};
  manifest.record_timing("total", total.ms());
  manifest.write(manifest_path(o.manifest, o.out, "eval"), kExitOk);
  return kExitOk;
}

}  // namespace mpf::cli
