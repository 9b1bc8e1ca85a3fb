#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input vector is not unit-norm within tolerance.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// Operands live on different or incompatible spaces.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed construction: overlapping control/target, non-unitary input,
/// inconsistent block split.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside the accepted domain (p outside [0,1], p = 1/2 where a
/// gap is required, invalid D).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Violated precondition of a higher-level contract, e.g. no unique marked
/// label in the non-Boolean lift.
class ContractError : public Error {
 public:
  using Error::Error;
};

class NearSingularError : public Error {
 public:
  NearSingularError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class DegreeCapError : public Error {
 public:
  DegreeCapError(const std::string& what, std::size_t degree)
      : Error(what), degree_(degree) {}
  std::size_t degree() const { return degree_; }

 private:
  std::size_t degree_;
};

class CompletionError : public Error {
 public:
  CompletionError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class StrippingError : public Error {
 public:
  StrippingError(const std::string& what, std::size_t degree)
      : Error(what), degree_(degree) {}
  /// Degree at which the layer could not be peeled.
  std::size_t degree() const { return degree_; }

 private:
  std::size_t degree_;
};

}  // namespace tlab
