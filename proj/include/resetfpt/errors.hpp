#pragma once

#include <stdexcept>
#include <string>

namespace resetfpt {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (e.g. D_nu with nu > 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A quadrature or iterative method failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A model or problem description violates one of its invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Simulation settings that cannot produce a usable estimate.
class ConfigError : public Error {
public:
    using Error::Error;
};

class SingularSystemError : public Error {
public:
    SingularSystemError(const std::string& what, double condition)
        : Error(what), condition_(condition) {}

    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

}  // namespace resetfpt
