#pragma once

#include <stdexcept>
#include <string>

namespace photoncube {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violated an operation's precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written, or its contents are malformed.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A near-sensor resource constraint (RAM, exchange reach) was violated.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace detail
}  // namespace photoncube
