#pragma once

#include "mpf/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace mpf {

/// Binary container, all integers little-endian:
///
///   offset  size  field
///   0       4     magic "MPFD"
///   4       2     version (1)
///   6       1     encoding (0 bit-packed, 1 byte-per-element, 2 float64)
///   7       1     reserved, 0
///   8       4     d
///   12      8     row count |D|
///   20      ...   rows
///
/// Bit-packed rows take ceil(d/8) bytes, element k in byte k/8 at bit k%8
/// (LSB first), unused high bits zero. Byte rows hold one 0/1 byte per
/// element. Float64 rows hold d IEEE-754 doubles.
enum class Encoding : std::uint8_t { bit_packed = 0, byte_per_element = 1, float64 = 2 };

inline constexpr std::uint16_t kDatasetFormatVersion = 1;
inline constexpr std::size_t kDatasetHeaderSize = 20;

enum class DatasetKind { automatic, binary, continuous };

void write_dataset_binary(const std::filesystem::path& path, const BinaryDataset& data,
                          Encoding encoding = Encoding::bit_packed);
void write_dataset_binary(const std::filesystem::path& path, const ContinuousDataset& data);
Dataset read_dataset_binary(const std::filesystem::path& path);

/// CSV: one state per line, comma-separated; blank lines and lines starting
/// with '#' are skipped. Binary CSV accepts only 0 and 1.
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset_csv(const std::filesystem::path& path, DatasetKind kind = DatasetKind::automatic);

/// Dispatches on the magic bytes; anything else is parsed as CSV. With
/// `automatic`, CSV containing only 0/1 tokens is read as binary.
Dataset read_dataset(const std::filesystem::path& path, DatasetKind kind = DatasetKind::automatic);

std::string encoding_name(Encoding e);
Encoding parse_encoding(const std::string& name);

}  // namespace mpf
