#include "commands.hpp"
#include "mpf_cli/cli.hpp"
#include "mpf_cli/manifest.hpp"
#include "util.hpp"

#include "mpf/atomic_write.hpp"
#include "mpf/error.hpp"
#include "mpf/model_io.hpp"
#include "mpf/sampler.hpp"

#include <ostream>

namespace mpf::cli {

int cmd_gen(const GenOptions& o, std::ostream& out) {
  RunManifest manifest("gen");
  Stopwatch total;
  const Encoding encoding = parse_encoding(o.encoding);
  if (encoding == Encoding::float64) throw InvalidArgument("gen writes binary states; float64 is not allowed");

  ModelWithParams mp;
  std::string model_file = o.model;
  if (!o.model.empty()) {
    mp = load_model(o.model);
    manifest.add_input(o.model);
  } else {
    mp = random_coupling(o.random_coupling, o.variance, o.seed);
    if (!o.model_out.empty()) {
      save_model(o.model_out, *mp.model, mp.params);
      manifest.add_output(o.model_out);
      model_file = o.model_out;
    }
  }

  SamplerConfig cfg;
  cfg.n_samples = o.n_samples;
  cfg.burn_in = o.burn_in;
  cfg.thin = o.thin;
  cfg.seed = o.seed;
  const std::size_t d = mp.model->dim();

  Stopwatch sampling;
  BinaryDataset data;
  std::string sampler;
  if (const auto* ising = dynamic_cast<const IsingModel*>(mp.model.get())) {
    data = gibbs_sample_ising(*ising, mp.params, cfg);
    sampler = "gibbs-ising";
  } else if (const auto* rbm = dynamic_cast<const RbmMarginalModel*>(mp.model.get())) {
    data = gibbs_sample_rbm(*rbm, mp.params, cfg);
    sampler = "block-gibbs-rbm";
  } else {
    throw UnsupportedCapability(mp.model->kind() + ": gen samples ising and rbm_marginal models only");
  }
  manifest.record_timing("sample", sampling.ms());

  write_dataset(o.out, data, encoding);
  manifest.add_output(o.out);

  const std::string sidecar = o.out + ".json";
  nlohmann::json side = {{"format_version", 1},
                         {"model_file", model_file},
                         {"model_kind", mp.model->kind()},
                         {"sampler", sampler},
                         {"seed", o.seed},
                         {"burn_in", cfg.resolved_burn_in(d)},
                         {"thin", cfg.resolved_thin(d)},
                         {"n_samples", cfg.n_samples},
                         {"d", d}};
  if (o.model.empty()) side["random_coupling_variance"] = o.variance;
  write_file_atomically(sidecar, side.dump(2) + '\n');
  manifest.add_output(sidecar);

  manifest.config() = {{"model", o.model},
                       {"random_coupling", o.random_coupling},
                       {"variance", o.variance},
                       {"model_out", o.model_out},
                       {"n_samples", o.n_samples},
                       {"burn_in", cfg.resolved_burn_in(d)},
                       {"thin", cfg.resolved_thin(d)},
                       {"seed", o.seed},
                       {"out", o.out},
                       {"encoding", encoding_name(encoding)}};
  manifest.record_timing("total", total.ms());
  manifest.write(manifest_path(o.manifest, o.out, "gen"), kExitOk);
  out << "wrote " << data.size() << " samples (d=" << d << ") to " << o.out << '\n';
  return kExitOk;
}

}  // namespace mpf::cli
