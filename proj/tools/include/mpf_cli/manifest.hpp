#pragma once

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace mpf::cli {

inline constexpr int kManifestFormatVersion = 1;

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Record of one command invocation, written atomically when the run ends.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  nlohmann::json& config() { return config_; }
  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  void record_timing(const std::string& phase, double ms);

  /// Digests are taken here, so outputs must be complete.
  nlohmann::json to_json(int exit_code) const;
  void write(const std::filesystem::path& path, int exit_code) const;

 private:
  std::string command_;
  nlohmann::json config_ = nlohmann::json::object();
  std::vector<std::filesystem::path> inputs_;
  std::vector<std::filesystem::path> outputs_;
  nlohmann::json timings_ = nlohmann::json::object();
  std::chrono::system_clock::time_point started_;
};

/// Wall-clock milliseconds since construction.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace mpf::cli
