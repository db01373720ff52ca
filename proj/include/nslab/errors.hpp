#pragma once

#include <stdexcept>
#include <string>

namespace nslab {

/// Contract violation on a function's domain (nonpositive volume, v outside the
/// profile range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// End states that do not form an admissible 2-shock.
class InvalidShock : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Shock strength large enough that C* <= 0.
class ShockTooStrong : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Specific volume reached zero or went non-finite during a time step.
class VacuumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad call sequence or arguments (too few samples, mismatched cadence, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration file problems. `key()` names the offending key when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, std::string key = {}, int line = 0)
      : std::runtime_error(msg), key_(std::move(key)), line_(line) {}
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

}  // namespace nslab
