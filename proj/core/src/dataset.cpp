#include "mpf/dataset.hpp"

#include "mpf/error.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace mpf {

namespace {

void check_bits(std::span<const std::uint8_t> bits) {
  for (auto b : bits) {
    if (b > 1) throw InvalidArgument("binary state element must be 0 or 1, got " + std::to_string(b));
  }
}

}  // namespace

BinaryState::BinaryState(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) { check_bits(bits_); }

BinaryState::BinaryState(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw InvalidArgument("binary state element must be 0 or 1");
    bits_.push_back(static_cast<std::uint8_t>(b));
  }
}

BinaryState BinaryState::from_index(std::uint64_t index, std::size_t d) {
  if (d > 64) throw InvalidArgument("state index only defined for d <= 64");
  std::vector<std::uint8_t> bits(d);
  for (std::size_t k = 0; k < d; ++k) bits[k] = static_cast<std::uint8_t>((index >> k) & 1U);
  return BinaryState(std::move(bits));
}

BinaryState BinaryState::flipped(std::size_t k) const {
  if (k >= bits_.size()) throw InvalidArgument("bit index out of range");
  BinaryState out = *this;
  out.bits_[k] ^= 1U;
  return out;
}

std::uint64_t BinaryState::index() const {
  if (bits_.size() > 64) throw InvalidArgument("state index only defined for d <= 64");
  std::uint64_t idx = 0;
  for (std::size_t k = 0; k < bits_.size(); ++k) idx |= static_cast<std::uint64_t>(bits_[k]) << k;
  return idx;
}

Eigen::VectorXd BinaryState::as_vector() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(bits_.size()));
  for (std::size_t k = 0; k < bits_.size(); ++k) v[static_cast<Eigen::Index>(k)] = bits_[k];
  return v;
}

BinaryDataset::BinaryDataset(std::size_t d, std::vector<std::uint8_t> row_major_bits)
    : d_(d), bits_(std::move(row_major_bits)) {
  if (d_ == 0) throw InvalidArgument("dataset dimension must be positive");
  if (bits_.empty() || bits_.size() % d_ != 0) {
    throw InvalidArgument("dataset must hold a positive whole number of rows of length d");
  }
  check_bits(bits_);
  n_ = bits_.size() / d_;
  build_index();
}

BinaryDataset::BinaryDataset(const std::vector<BinaryState>& states) {
  if (states.empty()) throw InvalidArgument("dataset must contain at least one state");
  d_ = states.front().dim();
  if (d_ == 0) throw InvalidArgument("dataset dimension must be positive");
  bits_.reserve(states.size() * d_);
  for (const auto& s : states) {
    if (s.dim() != d_) throw InvalidArgument("all dataset states must share dimension d");
    bits_.insert(bits_.end(), s.bits().begin(), s.bits().end());
  }
  n_ = states.size();
  build_index();
}

std::span<const std::uint8_t> BinaryDataset::row(std::size_t i) const {
  if (i >= n_) throw InvalidArgument("row index out of range");
  return {bits_.data() + i * d_, d_};
}

BinaryState BinaryDataset::state(std::size_t i) const {
  auto r = row(i);
  return BinaryState(std::vector<std::uint8_t>(r.begin(), r.end()));
}

void BinaryDataset::build_index() {
  std::vector<std::size_t> order(n_);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto row_less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(bits_.begin() + a * d_, bits_.begin() + (a + 1) * d_,
                                        bits_.begin() + b * d_, bits_.begin() + (b + 1) * d_);
  };
  auto row_eq = [&](std::size_t a, std::size_t b) {
    return std::equal(bits_.begin() + a * d_, bits_.begin() + (a + 1) * d_, bits_.begin() + b * d_);
  };
  std::stable_sort(order.begin(), order.end(), row_less);

  std::vector<std::size_t> first;
  std::vector<double> counts;
  for (std::size_t i = 0; i < n_; ++i) {
    if (i == 0 || !row_eq(order[i], order[i - 1])) {
      first.push_back(order[i]);
      counts.push_back(1.0);
    } else {
      counts.back() += 1.0;
    }
  }

  const auto u = first.size();
  distinct_bits_.resize(u * d_);
  distinct_.resize(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(d_));
  counts_.resize(static_cast<Eigen::Index>(u));
  for (std::size_t r = 0; r < u; ++r) {
    std::copy_n(bits_.begin() + first[r] * d_, d_, distinct_bits_.begin() + r * d_);
    for (std::size_t k = 0; k < d_; ++k) {
      distinct_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = distinct_bits_[r * d_ + k];
    }
    counts_[static_cast<Eigen::Index>(r)] = counts[r];
  }
}

bool BinaryDataset::contains(std::span<const std::uint8_t> bits) const {
  if (bits.size() != d_) throw InvalidArgument("state dimension does not match dataset");
  std::size_t lo = 0;
  std::size_t hi = counts_.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const auto* row = distinct_bits_.data() + mid * d_;
    const int cmp = std::lexicographical_compare(row, row + d_, bits.begin(), bits.end())
                        ? -1
                        : (std::equal(row, row + d_, bits.begin()) ? 0 : 1);
    if (cmp == 0) return true;
    if (cmp < 0) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return false;
}

ContinuousDataset::ContinuousDataset(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() == 0 || rows_.cols() == 0) throw InvalidArgument("continuous dataset must be non-empty");
  if (!rows_.allFinite()) throw InvalidArgument("continuous dataset contains non-finite entries");
}

}  // namespace mpf
