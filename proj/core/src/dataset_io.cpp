#include "mpf/dataset_io.hpp"

#include "mpf/atomic_write.hpp"
#include "mpf/error.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace mpf {

namespace {

constexpr std::array<char, 4> kMagic = {'M', 'P', 'F', 'D'};

template <class T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

template <class T>
T get_le(const unsigned char* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(p[i]) << (8 * i));
  return v;
}

std::string header(Encoding enc, std::size_t d, std::size_t n) {
  std::string out(kMagic.begin(), kMagic.end());
  put_le<std::uint16_t>(out, kDatasetFormatVersion);
  out.push_back(static_cast<char>(enc));
  out.push_back('\0');
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(d));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(n));
  return out;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open dataset file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_magic(const std::string& bytes) {
  return bytes.size() >= kMagic.size() && std::equal(kMagic.begin(), kMagic.end(), bytes.begin());
}

Dataset parse_binary(const std::string& bytes, const std::string& name) {
  if (bytes.size() < kDatasetHeaderSize || !has_magic(bytes)) {
    throw ParseError(name + ": not an MPFD dataset (bad magic or short header)");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const auto version = get_le<std::uint16_t>(p + 4);
  if (version != kDatasetFormatVersion) throw ParseError(name + ": unsupported dataset version");
  const auto enc = static_cast<Encoding>(p[6]);
  const auto d = static_cast<std::size_t>(get_le<std::uint32_t>(p + 8));
  const auto n = static_cast<std::size_t>(get_le<std::uint64_t>(p + 12));
  if (d == 0 || n == 0) throw ParseError(name + ": dataset must have d >= 1 and at least one row");

  std::size_t row_bytes = 0;
  switch (enc) {
    case Encoding::bit_packed: row_bytes = (d + 7) / 8; break;
    case Encoding::byte_per_element: row_bytes = d; break;
    case Encoding::float64: row_bytes = 8 * d; break;
    default: throw ParseError(name + ": unknown encoding byte");
  }
  if (bytes.size() != kDatasetHeaderSize + n * row_bytes) {
    throw ParseError(name + ": payload size does not match header (d=" + std::to_string(d) +
                     ", rows=" + std::to_string(n) + ")");
  }
  const unsigned char* body = p + kDatasetHeaderSize;

  if (enc == Encoding::float64) {
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t k = 0; k < d; ++k) {
        const auto raw = get_le<std::uint64_t>(body + (r * d + k) * 8);
        rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = std::bit_cast<double>(raw);
      }
    }
    return ContinuousDataset(std::move(rows));
  }

  std::vector<std::uint8_t> bits(n * d);
  for (std::size_t r = 0; r < n; ++r) {
    const unsigned char* row = body + r * row_bytes;
    for (std::size_t k = 0; k < d; ++k) {
      const unsigned v = enc == Encoding::bit_packed ? (row[k / 8] >> (k % 8)) & 1U : row[k];
      if (v > 1) throw ParseError(name + ": byte-per-element row holds a value other than 0/1");
      bits[r * d + k] = static_cast<std::uint8_t>(v);
    }
  }
  return BinaryDataset(d, std::move(bits));
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) {
      const auto b = field.find_first_not_of(" \t");
      const auto e = field.find_last_not_of(" \t");
      fields.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(std::move(fields));
  }
  return rows;
}

double parse_double(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("CSV row " + std::to_string(line) + ": cannot parse '" + tok + "' as a number");
  }
  return v;
}

}  // namespace

std::string encoding_name(Encoding e) {
  switch (e) {
    case Encoding::bit_packed: return "bit-packed";
    case Encoding::byte_per_element: return "byte-per-element";
    case Encoding::float64: return "float64";
  }
  return "unknown";
}

Encoding parse_encoding(const std::string& name) {
  if (name == "bit-packed") return Encoding::bit_packed;
  if (name == "byte-per-element" || name == "byte") return Encoding::byte_per_element;
  if (name == "float64") return Encoding::float64;
  throw InvalidArgument("unknown dataset encoding '" + name + "'");
}

void write_dataset_binary(const std::filesystem::path& path, const BinaryDataset& data, Encoding encoding) {
  if (encoding == Encoding::float64) throw InvalidArgument("binary datasets use bit-packed or byte encoding");
  const auto d = data.dim();
  const auto n = data.size();
  std::string out = header(encoding, d, n);
  if (encoding == Encoding::bit_packed) {
    const std::size_t row_bytes = (d + 7) / 8;
    for (std::size_t r = 0; r < n; ++r) {
      std::string row(row_bytes, '\0');
      const auto bits = data.row(r);
      for (std::size_t k = 0; k < d; ++k) {
        if (bits[k]) row[k / 8] = static_cast<char>(static_cast<unsigned char>(row[k / 8]) | (1U << (k % 8)));
      }
      out += row;
    }
  } else {
    out.append(reinterpret_cast<const char*>(data.raw().data()), data.raw().size());
  }
  write_file_atomically(path, out);
}

void write_dataset_binary(const std::filesystem::path& path, const ContinuousDataset& data) {
  const auto d = data.dim();
  const auto n = data.size();
  std::string out = header(Encoding::float64, d, n);
  out.reserve(out.size() + n * d * 8);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < d; ++k) {
      put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(
                                     data.rows()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k))));
    }
  }
  write_file_atomically(path, out);
}

Dataset read_dataset_binary(const std::filesystem::path& path) { return parse_binary(slurp(path), path.string()); }

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
  std::string out;
  if (const auto* bin = std::get_if<BinaryDataset>(&data)) {
    for (std::size_t r = 0; r < bin->size(); ++r) {
      const auto row = bin->row(r);
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (k) out.push_back(',');
        out.push_back(row[k] ? '1' : '0');
      }
      out.push_back('\n');
    }
  } else {
    const auto& rows = std::get<ContinuousDataset>(data).rows();
    std::array<char, 32> buf{};
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
      for (Eigen::Index k = 0; k < rows.cols(); ++k) {
        if (k) out.push_back(',');
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), rows(r, k));
        out.append(buf.data(), ptr);
      }
      out.push_back('\n');
    }
  }
  write_file_atomically(path, out);
}

Dataset read_dataset_csv(const std::filesystem::path& path, DatasetKind kind) {
  const auto rows = split_csv(slurp(path));
  if (rows.empty()) throw ParseError(path.string() + ": CSV dataset has no rows");
  const std::size_t d = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != d) {
      throw ParseError(path.string() + ": CSV row " + std::to_string(r + 1) + " has " +
                       std::to_string(rows[r].size()) + " fields, expected " + std::to_string(d));
    }
  }

  bool all_bits = true;
  for (const auto& row : rows)
    for (const auto& tok : row)
      if (tok != "0" && tok != "1") all_bits = false;

  if (kind == DatasetKind::binary || (kind == DatasetKind::automatic && all_bits)) {
    if (!all_bits) throw ParseError(path.string() + ": binary CSV may only contain 0 and 1");
    std::vector<std::uint8_t> bits;
    bits.reserve(rows.size() * d);
    for (const auto& row : rows)
      for (const auto& tok : row) bits.push_back(tok == "1" ? 1 : 0);
    return BinaryDataset(d, std::move(bits));
  }

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t k = 0; k < d; ++k)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = parse_double(rows[r][k], r + 1);
  try {
    return ContinuousDataset(std::move(m));
  } catch (const InvalidArgument& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Dataset read_dataset(const std::filesystem::path& path, DatasetKind kind) {
  const std::string bytes = slurp(path);
  if (has_magic(bytes)) {
    Dataset ds = parse_binary(bytes, path.string());
    if (kind == DatasetKind::binary && !std::holds_alternative<BinaryDataset>(ds)) {
      throw ParseError(path.string() + ": expected a binary dataset, found float64 rows");
    }
    if (kind == DatasetKind::continuous && !std::holds_alternative<ContinuousDataset>(ds)) {
      // 0/1 rows are valid continuous data.
      const auto& b = std::get<BinaryDataset>(ds);
      Eigen::MatrixXd m(static_cast<Eigen::Index>(b.size()), static_cast<Eigen::Index>(b.dim()));
      for (std::size_t r = 0; r < b.size(); ++r)
        for (std::size_t k = 0; k < b.dim(); ++k)
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = b.row(r)[k];
      return ContinuousDataset(std::move(m));
    }
    return ds;
  }
  return read_dataset_csv(path, kind);
}

}  // namespace mpf
