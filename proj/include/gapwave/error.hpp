#pragma once

#include <stdexcept>
#include <string>

namespace gapwave {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Two objects that must share a lattice do not.
class GridMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// An iterative kernel hit its iteration cap or produced a singular pivot.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input file (snapshots, tabulated potentials).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Scenario configuration problem. `field()` names the offending key, e.g. "potential.kind".
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace gapwave
