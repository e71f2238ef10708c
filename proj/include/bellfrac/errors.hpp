#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bellfrac {

/// Base class for all library errors. Carries a stable machine-readable code
/// and the process exit status used by the command-line tool.
class Error : public std::runtime_error {
public:
  Error(std::string code, int exit_status, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)), exit_status_(exit_status) {}

  const std::string& code() const noexcept { return code_; }
  int exit_status() const noexcept { return exit_status_; }

private:
  std::string code_;
  int exit_status_;
};

/// Malformed input that could not be parsed at all.
struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error("parse", 1, w) {}
};

/// Filesystem / stream failure.
struct IoError : Error {
  explicit IoError(const std::string& w) : Error("io", 1, w) {}
};

/// Structurally inconsistent data (array sizes, dimension mismatches).
struct ShapeError : Error {
  explicit ShapeError(const std::string& w) : Error("shape", 2, w) {}
};

/// Well-formed data violating a normalization or positivity constraint.
struct ValidationError : Error {
  explicit ValidationError(const std::string& w) : Error("validation", 2, w) {}
};

/// Statistics that signal from Bob's settings to Alice's outcomes, or whose
/// settings distribution does not factorize.
struct IndependenceViolation : Error {
  explicit IndependenceViolation(const std::string& w) : Error("independence", 2, w) {}
};

/// Operation requires specific cardinalities (e.g. two outcomes, two settings).
struct DimensionError : Error {
  explicit DimensionError(const std::string& w) : Error("dimension", 2, w) {}
};

/// A setting value that the model can never produce.
struct DegenerateSetting : Error {
  explicit DegenerateSetting(const std::string& w) : Error("degenerate", 2, w) {}
};

/// Problem size beyond the configured caps.
struct CapacityError : Error {
  explicit CapacityError(const std::string& w) : Error("capacity", 3, w) {}
};

/// Solver failed to converge within its iteration budget.
struct SolverError : Error {
  explicit SolverError(const std::string& w) : Error("nonconvergence", 4, w) {}
};

/// Invariant that should be unreachable for valid inputs.
struct InternalError : Error {
  explicit InternalError(const std::string& w) : Error("internal", 4, w) {}
};

}  // namespace bellfrac
