#pragma once

#include <stdexcept>
#include <string>

namespace rspde {

// Error taxonomy used across the library. All are catchable as std::runtime_error
// except IndexError/DomainError which keep their std bases for idiomatic catches.

struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

struct IndexError : std::out_of_range {
  explicit IndexError(const std::string& what) : std::out_of_range(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericError : std::runtime_error {
  NumericError(const std::string& what, long step) : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_index(step) {}
  long step_index;
};

}  // namespace rspde
