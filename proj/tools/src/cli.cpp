#include "mpf_cli/cli.hpp"

#include "commands.hpp"
#include "mpf/error.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <functional>
#include <ostream>

namespace mpf::cli {

std::string manifest_path(const std::string& explicit_path, const std::string& primary, const std::string& command) {
  if (!explicit_path.empty()) return explicit_path;
  if (!primary.empty()) return primary + ".manifest.json";
  return "mpf-" + command + ".manifest.json";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum probability flow learning for energy-based models", "mpf"};
  app.set_version_flag("--version", MPF_VERSION);
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Draw a dataset from a model by Gibbs sampling");
  auto* g_model = g->add_option("--model", gen.model, "Model JSON (ising or rbm_marginal)");
  auto* g_rand = g->add_option("--random-coupling", gen.random_coupling,
                               "Sample from a fresh Ising model with this many units");
  g_model->excludes(g_rand);
  g->add_option("--variance", gen.variance, "Coupling variance for --random-coupling")->capture_default_str();
  g->add_option("--model-out", gen.model_out, "Where to save the --random-coupling model");
  g->add_option("-n,--n", gen.n_samples, "Number of samples")->required();
  g->add_option("--burn-in", gen.burn_in, "Burn-in sweeps (default 100*d)");
  g->add_option("--thin", gen.thin, "Sweeps between samples (default d)");
  g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  g->add_option("-o,--out", gen.out, "Dataset path; .csv writes CSV, anything else the binary container")
      ->required();
  g->add_option("--encoding", gen.encoding, "bit-packed or byte-per-element")->capture_default_str();
  g->add_option("--manifest", gen.manifest, "Manifest path");

  FitOptions fit;
  auto* f = app.add_subcommand("fit", "Fit a model to a dataset");
  f->add_option("--kind", fit.kind, "ising, rbm_marginal, product_of_t or gaussian_toy")
      ->required()
      ->check(CLI::IsMember({"ising", "rbm_marginal", "product_of_t", "gaussian_toy"}));
  f->add_option("--data", fit.data, "Dataset (binary container or CSV)")->required();
  f->add_option("-o,--out", fit.out, "Fitted model JSON")->required();
  f->add_option("--d", fit.d, "Expected state dimension");
  f->add_option("--d-hid", fit.d_hid, "Hidden units (rbm_marginal)");
  f->add_option("--n-filters", fit.n_filters, "Filters (product_of_t)");
  f->add_option("--objective", fit.objective, "mpf, score-matching or exact-ml")
      ->capture_default_str()
      ->check(CLI::IsMember({"mpf", "score-matching", "exact-ml"}));
  f->add_option("--mode", fit.mode, "full-neighbor or strict")->capture_default_str();
  f->add_option("--eps", fit.eps, "Flow time")->capture_default_str();
  f->add_option("--stabilization", fit.stabilization, "clamp or log-sum-exp")
      ->capture_default_str()
      ->check(CLI::IsMember({"clamp", "log-sum-exp"}));
  f->add_option("--clamp-cap", fit.clamp_cap, "Exponent cap for clamp stabilization")->capture_default_str();
  f->add_option("--seed", fit.seed, "Seed for neighbours and the starting point")->capture_default_str();
  f->add_option("--neighbors", fit.neighbors, "Sampled neighbours per data point")->capture_default_str();
  f->add_option("--noise-scale", fit.noise_scale, "Neighbour noise standard deviation")->capture_default_str();
  f->add_flag("--no-rescale", fit.no_rescale, "Do not rescale neighbours to the data norm");
  f->add_flag("--hastings", fit.hastings, "Apply the proposal-ratio correction");
  f->add_flag("--symmetric-pairs", fit.symmetric_pairs, "Draw neighbour noise in antithetic pairs");
  f->add_option("--schedule", fit.schedule, "frozen or stochastic neighbours")
      ->capture_default_str()
      ->check(CLI::IsMember({"frozen", "stochastic"}));
  f->add_option("--max-iter", fit.max_iter, "Iteration limit")->capture_default_str();
  f->add_option("--grad-tol", fit.grad_tol, "Gradient-norm tolerance")->capture_default_str();
  f->add_option("--value-tol", fit.value_tol, "Relative value-change tolerance")->capture_default_str();
  f->add_option("--history", fit.history, "L-BFGS history size")->capture_default_str();
  f->add_option("--init", fit.init, "Starting model JSON");
  f->add_option("--threads", fit.threads, "Worker threads; 1 is strict-serial")->capture_default_str();
  f->add_option("--trace", fit.trace, "Trace path prefix (writes .csv and .jsonl)");
  f->add_option("--manifest", fit.manifest, "Manifest path");

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "Score a model against a truth model or a dataset");
  e->add_option("--model", ev.model, "Model JSON")->required();
  auto* e_truth = e->add_option("--truth", ev.truth, "Truth model JSON");
  auto* e_data = e->add_option("--data", ev.data, "Dataset");
  e_truth->excludes(e_data);
  e->add_option("-o,--out", ev.out, "Metrics JSON (default: stdout)");
  e->add_option("--samples", ev.samples, "Gibbs samples when d exceeds --max-exact-bits")->capture_default_str();
  e->add_option("--seed", ev.seed, "Gibbs seed")->capture_default_str();
  e->add_option("--max-exact-bits", ev.max_exact_bits, "Largest d evaluated by enumeration")->capture_default_str();
  e->add_option("--manifest", ev.manifest, "Manifest path");

  OracleOptions orc;
  auto* o = app.add_subcommand("oracle", "Check the sparse objective against the dense dynamics");
  o->add_option("fixture", orc.fixture, "Fixture JSON")->required();
  o->add_option("-o,--out", orc.out, "Report JSON (default: stdout)");
  o->add_option("--manifest", orc.manifest, "Manifest path");

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "Time generate, fit and eval on a random Ising problem");
  b->add_option("--d", bench.d, "Units")->capture_default_str();
  b->add_option("-n,--n", bench.n_samples, "Samples")->capture_default_str();
  b->add_option("--variance", bench.variance, "Coupling variance")->capture_default_str();
  b->add_option("--seed", bench.seed, "Seed")->capture_default_str();
  b->add_option("--threads", bench.threads, "Worker threads (0: all cores)")->capture_default_str();
  b->add_option("-o,--out", bench.out, "Timing CSV (default: stdout)");
  b->add_option("--workdir", bench.workdir, "Keep the generated model, data and fit here");
  b->add_option("--manifest", bench.manifest, "Manifest path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << MPF_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "mpf: " << ex.what() << '\n';
    return kExitUsage;
  }

  try {
    if (g->parsed()) {
      if (gen.model.empty() && gen.random_coupling == 0) {
        err << "mpf gen: one of --model or --random-coupling is required\n";
        return kExitUsage;
      }
      return cmd_gen(gen, out);
    }
    if (f->parsed()) return cmd_fit(fit, out);
    if (e->parsed()) {
      if (ev.truth.empty() && ev.data.empty()) {
        err << "mpf eval: one of --truth or --data is required\n";
        return kExitUsage;
      }
      return cmd_eval(ev, out);
    }
    if (o->parsed()) return cmd_oracle(orc, out);
    if (b->parsed()) return cmd_bench(bench, out);
  } catch (const ParseError& ex) {
    err << "mpf: parse error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& ex) {
    err << "mpf: parse error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& ex) {
    err << "mpf: invalid input: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& ex) {
    err << "mpf: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedCapability& ex) {
    err << "mpf: unsupported: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& ex) {
    err << "mpf: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& ex) {
    err << "mpf: numeric failure: " << ex.what() << '\n';
    return kExitNotConverged;
  } catch (const std::exception& ex) {
    err << "mpf: " << ex.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace mpf::cli
