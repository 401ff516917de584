#pragma once

#include <stdexcept>
#include <string>

namespace mixbound {

// Base of every error raised by the library. The CLI maps InvalidParameter
// and its relatives to exit code 2 and numerical failures to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

class UnknownScenario : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

class InvalidBracket : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonPSD : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DisconnectedSupport : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EigenFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class Divergent : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace mixbound
