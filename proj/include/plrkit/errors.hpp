#pragma once

#include <stdexcept>
#include <string>

namespace plrkit {

/// Root of every error the toolkit throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range user input (bad ids, parameters, files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A point outside dom f was used where a finite value is required.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// f takes the value +inf everywhere.
class ImproperFunctionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An operation's stated precondition does not hold; `witness` names where.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, std::string witness)
      : Error(what + " (witness: " + witness + ")"), witness_(std::move(witness)) {}

  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

/// An oracle is undefined somewhere it was required to be defined.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// Directional-derivative probing requested for a non-Lipschitz field.
class UnsupportedProbe : public Error {
 public:
  using Error::Error;
};

}  // namespace plrkit
