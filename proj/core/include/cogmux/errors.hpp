#pragma once

#include <stdexcept>
#include <string>

namespace cogmux {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative scheme (series, root finder, quadrature) ran out of budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Factorization failure or a non-finite intermediate.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two exponential scales in a partial-fraction expansion coincide.
class DegenerateScalesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration text or a violated SystemConfig invariant.
/// line() is 1-based, 0 when the problem is not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line = 0, std::string key = {})
      : std::runtime_error(msg), line_(line), key_(std::move(key)) {}

  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

}  // namespace cogmux
