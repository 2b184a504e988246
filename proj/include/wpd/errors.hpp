#pragma once

#include <stdexcept>
#include <string>

namespace wpd {

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown when the Fock-space cutoff leaves more probability mass outside
/// the truncated basis than the caller's tolerance allows.
struct TruncationTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OrderTooHigh : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingOrder : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wpd
