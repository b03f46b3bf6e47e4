#pragma once

#include <stdexcept>
#include <string>

namespace anderson {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class EmptyBoxError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class CoverInfeasibleError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class UnsupportedDistribution : public Error {
 public:
  using Error::Error;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

// Carries the name of the first violated inequality, e.g. "γ < √(ζ/ξ)".
class InfeasibleParameters : public Error {
 public:
  InfeasibleParameters(std::string inequality, const std::string& detail)
      : Error("infeasible parameters: " + inequality + " (" + detail + ")"),
        inequality_(std::move(inequality)) {}

  const std::string& inequality() const noexcept { return inequality_; }

 private:
  std::string inequality_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace anderson
