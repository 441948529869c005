#ifndef ABRIDGER_ERROR_HPP
#define ABRIDGER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace abridger {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user configuration: invalid regex, unknown enum value, out-of-range
/// parameter.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data that violates a documented precondition (count mismatches,
/// out-of-range indices, label/token disagreement, malformed files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A statistic whose value is undefined for the given input.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// A review correction that would break row invariants.
class RejectedCorrection : public Error {
 public:
  using Error::Error;
};

}  // namespace abridger

#endif  // ABRIDGER_ERROR_HPP
