#pragma once
#include <stdexcept>
#include <string>

namespace hypertoric {

// Typed failure conditions surfaced by the library. Each maps to a stable
// name so front ends (CLI, bindings) can report them uniformly.
enum class ErrorCode {
  ShapeMismatch,          // matrix dimensions disagree with declared (n, d)
  SigmaZero,              // direction vector a is identically zero
  ExhaustedAttempts,      // level sampler ran out of retries
  NotTransversal,         // direction lies inside the quotient torus algebra
  SingularJacobian,       // constraint Jacobian lost rank
  NoConvergence,          // Newton iteration missed its tolerance budget
  DegenerateOrbit,        // orbit directions collapse; quotient chart invalid
  DimensionMismatch,      // operation restricted to a specific ambient size
  UnsupportedNumberField, // entries leave the single quadratic field supported
  StepTooLarge,           // finite-difference refinement levels disagree
  PreconditionViolated,   // documented operation precondition not met
  ParseError              // malformed input document
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

} // namespace hypertoric
