#pragma once

#include <stdexcept>
#include <string>

namespace sphlaw {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the real/geometric domain of a map (e.g. |x| >= 1, or a
/// Gram matrix that is not positive definite).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Simplex at the boundary of existence: a diagonal cofactor or a
/// factorization pivot fell below the degeneracy tolerance.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Vanishing denominator of a birational map.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// A geometric transform whose target triangle does not exist.
class ExistenceError : public Error {
 public:
  using Error::Error;
};

/// Two routes that must agree did not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampler could not find points at a usable rate.
class SamplingError : public Error {
 public:
  using Error::Error;
};

}  // namespace sphlaw
