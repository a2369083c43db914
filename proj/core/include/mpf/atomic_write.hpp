#pragma once

#include <filesystem>
#include <string_view>

namespace mpf {

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partially written file.
void write_file_atomically(const std::filesystem::path& path, std::string_view contents);

}  // namespace mpf
