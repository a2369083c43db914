#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <vector>

namespace mpf {

/// A named rows x cols block inside a flat parameter vector, stored row-major.
struct ParamSegment {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t offset = 0;

  std::size_t size() const noexcept { return rows * cols; }
};

/// Ordered list of segments; offsets are contiguous from zero.
class ParamLayout {
 public:
  ParamLayout() = default;

  ParamLayout& add(std::string name, std::size_t rows, std::size_t cols);

  const std::vector<ParamSegment>& segments() const noexcept { return segments_; }
  std::size_t total_size() const noexcept { return total_; }
  const ParamSegment& segment(const std::string& name) const;
  bool has(const std::string& name) const noexcept;

  bool operator==(const ParamLayout& other) const;

 private:
  std::vector<ParamSegment> segments_;
  std::size_t total_ = 0;
};

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMajorMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMajorMatrix>;

/// Model parameters θ: flat values plus the layout naming each block.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(ParamLayout layout);
  ParamVector(ParamLayout layout, Eigen::VectorXd values);

  const ParamLayout& layout() const noexcept { return layout_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  Eigen::VectorXd& values() noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }

  ConstMatrixMap block(const std::string& name) const;
  MatrixMap block(const std::string& name);

  bool all_finite() const;

  /// Zero vector with the same layout.
  ParamVector zeros_like() const;

 private:
  ParamLayout layout_;
  Eigen::VectorXd values_;
};

}  // namespace mpf
