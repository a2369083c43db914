#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mpf {

/// Bad shapes, out-of-range indices, malformed configuration.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A non-finite energy or objective term was produced. Carries the state
/// that triggered it so callers can report it.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, std::vector<double> state)
      : std::runtime_error(what), state_(std::move(state)) {}

  const std::vector<double>& state() const noexcept { return state_; }

 private:
  std::vector<double> state_;
};

/// Dense oracle asked to enumerate a state space it refuses to allocate.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// The model does not provide an operation (e.g. state derivatives for a
/// discrete model).
class UnsupportedCapability : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed model/dataset/fixture files.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mpf
