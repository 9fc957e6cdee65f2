#pragma once

#include <stdexcept>
#include <string>

namespace padicres {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or mismatched arguments (bad denominator, prime/backend mismatch, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Inversion of an element or matrix that is zero / singular (possibly only to precision).
class SingularError : public Error {
 public:
  using Error::Error;
};

/// A series failed to converge, or a point lies outside the certified domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two algebraically equal routes disagree; on the capped backend this means
/// precision is exhausted.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

/// An operator system violates a hypothesis it was declared to satisfy.
class HypothesisError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

}  // namespace padicres
