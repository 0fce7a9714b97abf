#pragma once

#include <stdexcept>
#include <string>

namespace qdsim {

/// Malformed or inconsistent device description / input file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver failed to converge (diagnostics in the message).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Inputs left the validity region of the underlying model (e.g. pinch-off).
class ValidityError : public std::runtime_error {
 public:
  explicit ValidityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qdsim
