#pragma once

#include <stdexcept>
#include <string>

namespace mring {

// Invalid parameters or malformed configuration documents.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inputs outside the regime where an approximation or bound-state branch exists.
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Root finder or eigensolver did not produce an acceptable answer.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested null vector is not unique (two-fold degenerate boundary problem).
class DegenerateSubspaceError : public SolverError {
 public:
  using SolverError::SolverError;
};

// Operands describe rings of different sizes.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mring
