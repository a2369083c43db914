#include "mpf_cli/manifest.hpp"

#include "mpf/atomic_write.hpp"
#include "mpf/error.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

namespace mpf::cli {

namespace {

std::string iso_utc(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

}  // namespace

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string() + " for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 initialisation failed");
  }
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    std::array<char, 3> byte{};
    std::snprintf(byte.data(), byte.size(), "%02x", md[i]);
    hex += byte.data();
  }
  return hex;
}

RunManifest::RunManifest(std::string command)
    : command_(std::move(command)), started_(std::chrono::system_clock::now()) {}

void RunManifest::add_input(const std::filesystem::path& path) { inputs_.push_back(path); }
void RunManifest::add_output(const std::filesystem::path& path) { outputs_.push_back(path); }
void RunManifest::record_timing(const std::string& phase, double ms) { timings_[phase] = ms; }

nlohmann::json RunManifest::to_json(int exit_code) const {
  auto files = [](const std::vector<std::filesystem::path>& paths) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : paths) {
      nlohmann::json entry = {{"path", p.string()}};
      if (std::filesystem::exists(p)) entry["sha256"] = sha256_file(p);
      arr.push_back(entry);
    }
    return arr;
  };
  return {{"format_version", kManifestFormatVersion},
          {"command", command_},
          {"tool_version", MPF_VERSION},
          {"started_utc", iso_utc(started_)},
          {"config", config_},
          {"inputs", files(inputs_)},
          {"outputs", files(outputs_)},
          {"timings_ms", timings_},
          {"exit_code", exit_code}};
}

void RunManifest::write(const std::filesystem::path& path, int exit_code) const {
  write_file_atomically(path, to_json(exit_code).dump(2) + '\n');
}

}  // namespace mpf::cli
