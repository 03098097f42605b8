#pragma once

#include <stdexcept>
#include <string>

namespace dftlab {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: out-of-range parameters, malformed files, mismatched grids.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to converge or bracket its target.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Density-to-potential inversion could not reach the requested occupation.
class InversionFailure : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Two routes to the same quantity disagree beyond their error budget.
class InternalConsistencyError : public SolverError {
 public:
  using SolverError::SolverError;
};

class ResolutionError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class CoverageError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class UnsupportedShell : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class ApplicabilityError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class SingularFit : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace dftlab
