#include "commands.hpp"
#include "mpf_cli/cli.hpp"
#include "mpf_cli/manifest.hpp"
#include "util.hpp"

#include "mpf/atomic_write.hpp"
#include "mpf/discrete_mpf.hpp"
#include "mpf/error.hpp"
#include "mpf/model_io.hpp"
#include "mpf/oracle.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mpf::cli {

namespace {

struct Tolerances {
  double k_relative = 1e-12;
  double column_sum = 1e-12;
  double detailed_balance = 1e-12;
  double taylor_relative = 1e-2;
  /// Used instead of the relative test when strict K is zero.
  double taylor_absolute = 1e-6;
  double min_hessian_eig = -1e-6;
};

Tolerances read_tolerances(const nlohmann::json& fixture) {
  Tolerances t;
  if (!fixture.contains("tolerances")) return t;
  const auto& j = fixture.at("tolerances");
  t.k_relative = j.value("k_relative", t.k_relative);
  t.column_sum = j.value("column_sum", t.column_sum);
  t.detailed_balance = j.value("detailed_balance", t.detailed_balance);
  t.taylor_relative = j.value("taylor_relative", t.taylor_relative);
  t.taylor_absolute = j.value("taylor_absolute", t.taylor_absolute);
  t.min_hessian_eig = j.value("min_hessian_eig", t.min_hessian_eig);
  return t;
}

BinaryDataset read_fixture_data(const nlohmann::json& fixture, std::size_t d) {
  if (!fixture.contains("data") || !fixture.at("data").is_array() || fixture.at("data").empty()) {
    throw ParseError("fixture: 'data' must be a non-empty array of 0/1 rows");
  }
  std::vector<std::uint8_t> bits;
  for (const auto& row : fixture.at("data")) {
    if (!row.is_array() || row.size() != d) throw ParseError("fixture: every data row needs d entries");
    for (const auto& b : row) {
      if (!b.is_number_integer() || (b.get<int>() != 0 && b.get<int>() != 1)) {
        throw ParseError("fixture: data entries must be 0 or 1");
      }
      bits.push_back(static_cast<std::uint8_t>(b.get<int>()));
    }
  }
  return BinaryDataset(d, std::move(bits));
}

}  // namespace

int cmd_oracle(const OracleOptions& o, std::ostream& out) {
  RunManifest manifest("oracle");
  Stopwatch total;
  std::ifstream in(o.fixture);
  if (!in) throw ParseError("cannot open fixture " + o.fixture);
  std::stringstream buf;
  buf << in.rdbuf();
  const nlohmann::json fixture = nlohmann::json::parse(buf.str());
  manifest.add_input(o.fixture);

  if (!fixture.contains("model")) throw ParseError("fixture: missing 'model'");
  const ModelWithParams mp = model_from_json(fixture.at("model").dump());
  const EnergyModel& model = *mp.model;
  const BinaryDataset data = read_fixture_data(fixture, model.dim());
  FitConfig cfg;
  cfg.mode = parse_flow_mode(fixture.value("mode", std::string("full-neighbor")));
  cfg.flow_time = fixture.value("eps", 1.0);
  cfg.validate();
  const Tolerances tol = read_tolerances(fixture);

  nlohmann::json report = {{"format_version", 1},
                           {"model_kind", model.kind()},
                           {"d", model.dim()},
                           {"n_samples", data.size()},
                           {"mode", to_string(cfg.mode)},
                           {"eps", cfg.flow_time}};
  nlohmann::json checks = nlohmann::json::object();

  const double k_sparse = mpf_objective(model, data, mp.params, cfg).value;
  const double k_dense = oracle::brute_force_K(model, data, mp.params, cfg.flow_time, cfg.mode);
  const double k_err = std::abs(k_sparse - k_dense) / std::max(std::abs(k_dense), 1e-300);
  report["K_sparse"] = k_sparse;
  report["K_dense"] = k_dense;
  report["K_relative_error"] = (k_sparse == k_dense) ? 0.0 : k_err;
  checks["K_equivalence"] = k_sparse == k_dense || k_err <= tol.k_relative;

  oracle::TransitionMatrix gamma = oracle::build_transition_matrix(model, mp.params);
  if (fixture.contains("gamma_perturbation")) {
    const auto& p = fixture.at("gamma_perturbation");
    const auto i = p.at("i").get<Eigen::Index>();
    const auto j = p.at("j").get<Eigen::Index>();
    if (i < 0 || j < 0 || i >= gamma.entries.rows() || j >= gamma.entries.cols() || i == j) {
      throw ParseError("fixture: gamma_perturbation needs distinct in-range i and j");
    }
    gamma.entries(i, j) += p.at("delta").get<double>();
  }
  const double col = oracle::max_column_sum(gamma);
  const double db = oracle::check_detailed_balance(gamma, oracle::exact_model_distribution(model, mp.params));
  report["column_sum_max"] = col;
  report["detailed_balance_violation"] = db;
  checks["column_sums"] = col <= tol.column_sum;
  checks["detailed_balance"] = db <= tol.detailed_balance;

  const oracle::TaylorCheck taylor = oracle::taylor_check(model, data, mp.params);
  report["taylor_slope"] = taylor.slope_at_zero;
  report["taylor_strict_K"] = taylor.strict_K;
  report["taylor_ratios"] = taylor.ratios;
  report["taylor_flow_times"] = taylor.flow_times;
  if (taylor.strict_K > 0.0) {
    report["taylor_relative_error"] = taylor.relative_error;
    checks["taylor"] = taylor.relative_error <= tol.taylor_relative;
  } else {
    checks["taylor"] = std::abs(taylor.slope_at_zero) <= tol.taylor_absolute;
  }

  if (model.is_exponential_family()) {
    const double eig = oracle::min_eigenvalue(oracle::numerical_hessian_of_K(model, data, mp.params, 1e-4, cfg));
    report["min_hessian_eig"] = eig;
    checks["hessian_psd"] = eig >= tol.min_hessian_eig;
  } else {
    report["min_hessian_eig"] = nullptr;
  }

  bool passed = true;
  for (const auto& [name, ok] : checks.items()) passed = passed && ok.get<bool>();
  report["checks"] = checks;
  report["passed"] = passed;

  const std::string text = report.dump(2) + '\n';
  if (o.out.empty()) {
    out << text;
  } else {
    write_file_atomically(o.out, text);
    manifest.add_output(o.out);
  }
  const int code = passed ? kExitOk : kExitOracleFailed;
  manifest.config() = {{"fixture", o.fixture}, {"out", o.out}};
  manifest.record_timing("total", total.ms());
  manifest.write(manifest_path(o.manifest, o.out, "oracle"), code);
  return code;
}

}  // namespace mpf::cli
