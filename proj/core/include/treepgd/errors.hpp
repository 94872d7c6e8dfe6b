#pragma once

#include <stdexcept>
#include <string>

namespace treepgd {

// Bad flag or parameter value supplied by the caller (CLI exit code 1).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Inconsistent or malformed input data, including dimension mismatches
// (CLI exit code 2).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values or other numeric failure during computation
// (CLI exit code 3).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace treepgd
