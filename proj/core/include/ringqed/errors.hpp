#pragma once

#include <stdexcept>
#include <string>

namespace ringqed {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or dimensions are incompatible.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Factor labels are unknown, duplicated, or belong to a different layout.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// A matrix fails the density-matrix checks (trace, hermiticity, finiteness).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Parameters are out of range or the request is malformed.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A closed-form expression hits a pole.
class SingularityError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_good_time)
      : Error(what), last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The Liouvillian kernel is more than one dimensional.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, double gap) : Error(what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

/// Second-order correlation requested for an empty mode.
class UnmeasurableModeError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace ringqed
