#pragma once

#include <stdexcept>
#include <string>

namespace mvcca {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller broke a documented precondition (bad shape, invalid argument).
class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& msg) : Error(msg) {}
};

// Non-finite values where finite ones were required. The training loop maps
// this onto TrainingDiverged.
class NonFiniteError : public ContractViolation {
 public:
  explicit NonFiniteError(const std::string& msg) : ContractViolation(msg) {}
};

// An iterative decomposition failed to converge; the message names the
// matrix dimensions involved.
class NumericFailure : public Error {
 public:
  explicit NumericFailure(const std::string& msg) : Error(msg) {}
};

// A matrix was numerically singular where an inverse was required; the
// message names the offending eigenvalue.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& msg) : Error(msg) {}
};

// The training loss became non-finite.
class TrainingDiverged : public Error {
 public:
  TrainingDiverged(const std::string& msg, int epoch) : Error(msg), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

// A malformed input file; the message carries the row/column or field.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// A metric is undefined on the given input (zero-variance target, all-zero
// weight matrix).
class UndefinedMetric : public Error {
 public:
  explicit UndefinedMetric(const std::string& msg) : Error(msg) {}
};

}  // namespace mvcca
