#pragma once

#include <stdexcept>
#include <string>

namespace tigranet {

/// Operand shapes or counts that do not match.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed on-disk container (IDX, checkpoint, dataset cache, image).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values where finite ones are required (e.g. training divergence).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense reference computation requested on a graph above the configured limit.
class OracleSizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace tigranet
