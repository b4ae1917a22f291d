#pragma once

#include <stdexcept>
#include <string>

namespace modelspace {

/// Raised when an operation is called outside its domain (bad input, violated
/// precondition). The CLI maps it to exit code 2.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an algorithm fails to converge or loses the accuracy it
/// promises. The CLI maps it to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace modelspace
