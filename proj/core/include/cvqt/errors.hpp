#pragma once

#include <stdexcept>
#include <string>

namespace cvqt {

// Argument outside the mathematical domain of an operation (T > 1, kappa < 1/2, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operands whose shapes or variable counts do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation produced something that cannot be a physical answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Heralding outcome with vanishing probability (e.g. subtracting from vacuum).
class MeasureZeroOutcome : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Gaussian integral over a kernel block that is not positive definite.
class NonConvergentIntegral : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Truncated Fock space holds too little of the state's population.
class CutoffTooSmall : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace cvqt
