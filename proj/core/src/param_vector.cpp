#include "mpf/param_vector.hpp"

#include "mpf/error.hpp"

#include <algorithm>

namespace mpf {

ParamLayout& ParamLayout::add(std::string name, std::size_t rows, std::size_t cols) {
  if (has(name)) throw InvalidArgument("duplicate parameter segment '" + name + "'");
  segments_.push_back(ParamSegment{std::move(name), rows, cols, total_});
  total_ += rows * cols;
  return *this;
}

const ParamSegment& ParamLayout::segment(const std::string& name) const {
  auto it = std::find_if(segments_.begin(), segments_.end(),
                         [&](const ParamSegment& s) { return s.name == name; });
  if (it == segments_.end()) throw InvalidArgument("no parameter segment '" + name + "'");
  return *it;
}

bool ParamLayout::has(const std::string& name) const noexcept {
  return std::any_of(segments_.begin(), segments_.end(),
                     [&](const ParamSegment& s) { return s.name == name; });
}

bool ParamLayout::operator==(const ParamLayout& other) const {
  if (segments_.size() != other.segments_.size()) return false;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& a = segments_[i];
    const auto& b = other.segments_[i];
    if (a.name != b.name || a.rows != b.rows || a.cols != b.cols) return false;
  }
  return true;
}

ParamVector::ParamVector(ParamLayout layout)
    : layout_(std::move(layout)),
      values_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout_.total_size()))) {}

ParamVector::ParamVector(ParamLayout layout, Eigen::VectorXd values)
    : layout_(std::move(layout)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != layout_.total_size()) {
    throw InvalidArgument("parameter vector length " + std::to_string(values_.size()) +
                          " does not match layout size " +
                          std::to_string(layout_.total_size()));
  }
}

ConstMatrixMap ParamVector::block(const std::string& name) const {
  const auto& s = layout_.segment(name);
  return ConstMatrixMap(values_.data() + s.offset, static_cast<Eigen::Index>(s.rows),
                        static_cast<Eigen::Index>(s.cols));
}

MatrixMap ParamVector::block(const std::string& name) {
  const auto& s = layout_.segment(name);
  return MatrixMap(values_.data() + s.offset, static_cast<Eigen::Index>(s.rows),
                   static_cast<Eigen::Index>(s.cols));
}

bool ParamVector::all_finite() const { return values_.allFinite(); }

ParamVector ParamVector::zeros_like() const { return ParamVector(layout_); }

}  // namespace mpf
