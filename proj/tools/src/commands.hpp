#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace mpf::cli {

struct GenOptions {
  std::string model;
  std::size_t random_coupling = 0;
  double variance = 0.04;
  std::string model_out;
  std::size_t n_samples = 0;
  std::optional<std::size_t> burn_in;
  std::optional<std::size_t> thin;
  std::uint64_t seed = 0;
  std::string out;
  std::string encoding = "bit-packed";
  std::string manifest;
};

struct FitOptions {
  std::string kind;
  std::string data;
  std::string out;
  std::optional<std::size_t> d;
  std::size_t d_hid = 0;
  std::size_t n_filters = 0;
  std::string objective = "mpf";
  std::string mode = "full-neighbor";
  double eps = 1.0;
  std::string stabilization = "clamp";
  double clamp_cap = 30.0;
  std::uint64_t seed = 0;
  std::size_t neighbors = 2;
  double noise_scale = 0.1;
  bool no_rescale = false;
  bool hastings = false;
  bool symmetric_pairs = false;
  std::string schedule = "frozen";
  std::size_t max_iter = 1000;
  double grad_tol = 1e-7;
  double value_tol = 1e-15;
  std::size_t history = 10;
  std::string init;
  unsigned threads = 1;
  std::string trace;
  std::string manifest;
};

struct EvalOptions {
  std::string model;
  std::string truth;
  std::string data;
  std::string out;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  std::size_t max_exact_bits = 16;
  std::string manifest;
};

struct OracleOptions {
  std::string fixture;
  std::string out;
  std::string manifest;
};

struct BenchOptions {
  std::size_t d = 40;
  std::size_t n_samples = 20000;
  double variance = 0.04;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out;
  std::string workdir;
  std::string manifest;
};

int cmd_gen(const GenOptions& o, std::ostream& out);
int cmd_fit(const FitOptions& o, std::ostream& out);
int cmd_eval(const EvalOptions& o, std::ostream& out);
int cmd_oracle(const OracleOptions& o, std::ostream& out);
int cmd_bench(const BenchOptions& o, std::ostream& out);

/// `explicit_path` if set, else `<primary>.manifest.json`, else
/// `mpf-<command>.manifest.json`.
std::string manifest_path(const std::string& explicit_path, const std::string& primary, const std::string& command);

}  // namespace mpf::cli
