#pragma once

#include "mpf/optimizer.hpp"

#include <filesystem>
#include <string>

namespace mpf {

inline constexpr int kTraceFormatVersion = 1;

/// "# format_version: 1" then a header line iter,value,grad_norm,elapsed_ms
/// and one row per record.
std::string trace_to_csv(const FitTrace& trace);

/// One JSON object per record with keys format_version, iter, value,
/// grad_norm, step, elapsed_ms; a final line carries the termination reason.
std::string trace_to_jsonl(const FitTrace& trace);

void write_trace_csv(const std::filesystem::path& path, const FitTrace& trace);
void write_trace_jsonl(const std::filesystem::path& path, const FitTrace& trace);

}  // namespace mpf
