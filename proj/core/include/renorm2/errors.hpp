#pragma once

#include <stdexcept>
#include <string>

namespace renorm2 {

/// Base class of every failure thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed, incomplete or self-contradictory configuration input.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A structural precondition does not hold: a required inequality on the
/// map constants fails, a constant term is where none is allowed, a branch
/// point sits at the origin, multipliers are resonant, and so on.  The
/// message always names the violated constraint.
class HypothesisError : public Error {
public:
  using Error::Error;
};

/// The computation ran but the numbers came out wrong: expected growth is
/// absent, a residual refuses to shrink, a root search stalls.
class DiagnosticError : public Error {
public:
  using Error::Error;
};

/// An evaluator produced NaN or infinity.
class EvaluationError : public DiagnosticError {
public:
  using DiagnosticError::DiagnosticError;
};

}
