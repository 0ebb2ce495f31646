#pragma once

#include <stdexcept>
#include <string>

namespace bplat {

// Pose or actuator command outside the reachable workspace.
class WorkspaceError : public std::runtime_error {
 public:
  explicit WorkspaceError(const std::string& what) : std::runtime_error(what) {}
};

// Input outside the domain of an analytic operation (e.g. zero vertical load).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual(residual), iterations(iterations) {}
  double residual;
  int iterations;
};

// Linear system too ill-conditioned to solve reliably.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, double rcond)
      : std::runtime_error(what), rcond(rcond) {}
  double rcond;
};

// Invalid configuration; field_path points at the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string field_path = "")
      : std::runtime_error(what), field_path(std::move(field_path)) {}
  std::string field_path;
};

}  // namespace bplat
