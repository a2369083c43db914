#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace mpf {

/// A d-element vector of {0,1}. Bit k maps to the k-th least significant
/// bit of the state index used by the dense oracle.
class BinaryState {
 public:
  BinaryState() = default;
  explicit BinaryState(std::vector<std::uint8_t> bits);
  BinaryState(std::initializer_list<int> bits);

  static BinaryState from_index(std::uint64_t index, std::size_t d);

  std::size_t dim() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t k) const { return bits_[k]; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  BinaryState flipped(std::size_t k) const;
  std::uint64_t index() const;
  Eigen::VectorXd as_vector() const;

  bool operator==(const BinaryState&) const = default;
  auto operator<=>(const BinaryState&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Observed binary states with multiplicity. The de-duplicated, sorted view
/// (distinct rows + counts) is built once at construction; objectives sum
/// over it so dataset order never affects results.
class BinaryDataset {
 public:
  BinaryDataset() = default;
  BinaryDataset(std::size_t d, std::vector<std::uint8_t> row_major_bits);
  explicit BinaryDataset(const std::vector<BinaryState>& states);

  std::size_t dim() const noexcept { return d_; }
  std::size_t size() const noexcept { return n_; }
  std::span<const std::uint8_t> row(std::size_t i) const;
  BinaryState state(std::size_t i) const;
  const std::vector<std::uint8_t>& raw() const noexcept { return bits_; }

  std::size_t distinct_count() const noexcept { return counts_.size(); }
  /// Distinct rows as doubles, sorted lexicographically (distinct_count x d).
  const Eigen::MatrixXd& distinct_rows() const noexcept { return distinct_; }
  /// Multiplicity of each distinct row.
  const Eigen::VectorXd& distinct_counts() const noexcept { return counts_; }

  bool contains(std::span<const std::uint8_t> bits) const;

 private:
  void build_index();

  std::size_t d_ = 0;
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
  std::vector<std::uint8_t> distinct_bits_;  // sorted, row-major
  Eigen::MatrixXd distinct_;
  Eigen::VectorXd counts_;
};

/// Observed real-valued states, one row per observation.
class ContinuousDataset {
 public:
  ContinuousDataset() = default;
  explicit ContinuousDataset(Eigen::MatrixXd rows);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(rows_.cols()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(rows_.rows()); }
  const Eigen::MatrixXd& rows() const noexcept { return rows_; }
  Eigen::VectorXd state(std::size_t i) const { return rows_.row(static_cast<Eigen::Index>(i)).transpose(); }

 private:
  Eigen::MatrixXd rows_;
};

using Dataset = std::variant<BinaryDataset, ContinuousDataset>;

}  // namespace mpf
