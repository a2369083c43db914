#include "mpf/trace_io.hpp"

#include "mpf/atomic_write.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>

namespace mpf {

std::string trace_to_csv(const FitTrace& trace) {
  std::ostringstream out;
  out << "# format_version: " << kTraceFormatVersion << '\n';
  out << "iter,value,grad_norm,elapsed_ms\n";
  out << std::setprecision(17);
  for (const auto& r : trace.records) {
    out << r.iteration << ',' << r.value << ',' << r.grad_norm << ',' << r.elapsed_ms << '\n';
  }
  return out.str();
}

std::string trace_to_jsonl(const FitTrace& trace) {
  std::string out;
  for (const auto& r : trace.records) {
    nlohmann::json j = {{"format_version", kTraceFormatVersion},
                        {"iter", r.iteration},
                        {"value", r.value},
                        {"grad_norm", r.grad_norm},
                        {"step", r.step},
                        {"elapsed_ms", r.elapsed_ms}};
    out += j.dump() + '\n';
  }
  nlohmann::json tail = {{"format_version", kTraceFormatVersion}, {"termination", to_string(trace.reason)}};
  out += tail.dump() + '\n';
  return out;
}

void write_trace_csv(const std::filesystem::path& path, const FitTrace& trace) {
  write_file_atomically(path, trace_to_csv(trace));
}

void write_trace_jsonl(const std::filesystem::path& path, const FitTrace& trace) {
  write_file_atomically(path, trace_to_jsonl(trace));
}

}  // namespace mpf
