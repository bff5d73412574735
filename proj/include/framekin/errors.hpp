#pragma once

#include <stdexcept>
#include <string>

namespace framekin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point lies outside the domain where a chart, metric or frame is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inputs violate a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed: singular matrix, non-convergence, step underflow.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace framekin
