#pragma once
#include <stdexcept>
#include <string>

namespace ellspec {

/// Caller supplied a value outside an operation's domain.
class InvalidInput : public std::invalid_argument {
public:
  explicit InvalidInput(const std::string &what) : std::invalid_argument(what) {}
};

/// A discretization setting cannot support the requested computation.
class ConfigError : public std::invalid_argument {
public:
  explicit ConfigError(const std::string &what) : std::invalid_argument(what) {}
};

/// An iterative method failed to converge or produced an inconsistent result.
class NumericalFailure : public std::runtime_error {
public:
  explicit NumericalFailure(const std::string &what) : std::runtime_error(what) {}
};

} // namespace ellspec
