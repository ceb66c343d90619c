#pragma once

#include <stdexcept>
#include <string>

namespace corrsense {

/// Base class for all library errors. `exit_code()` is the status the CLI
/// reports when the error escapes a subcommand.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Malformed call: mismatched lengths, bad option combination.
class UsageError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class SingularityError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

class NumericalInstabilityError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

/// A memory or size guard refused the request.
class ResourceError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

}  // namespace corrsense
