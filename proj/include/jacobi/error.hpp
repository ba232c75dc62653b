#pragma once

#include <stdexcept>
#include <string>

namespace jacobi {

/// Failure categories. The numeric values are shared with the C API status codes.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Schema = 2,
  Domain = 3,
  Numerical = 4,
  Precondition = 5,
  Internal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Evaluation outside the interval a family or solution is defined on.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

/// Integrator or rank machinery could not meet its tolerances.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorCode::Numerical, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorCode::Precondition, what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::InvalidArgument, what) {}
};

/// Malformed scenario document.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(ErrorCode::Schema, what) {}
};

}  // namespace jacobi
