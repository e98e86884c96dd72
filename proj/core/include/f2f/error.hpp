#pragma once

#include <stdexcept>
#include <string>

namespace f2f {

/// Invalid configuration or parameters violating a precondition.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: impossible detection branch, exhausted state, rejected fit.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace f2f
