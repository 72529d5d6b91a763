#pragma once

#include <stdexcept>
#include <string>

namespace ermm {

// Process exit codes used by the command-line front end.
enum class ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kUsage = 2,
  kResource = 3,
};

// Caller violated a documented precondition.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation was refused because it would exceed a size guard.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solver failed to reach an exact fixed point.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested limit has no known closed form or census.
class NotProvidedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An internal consistency check failed; always an implementation bug.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ermm
