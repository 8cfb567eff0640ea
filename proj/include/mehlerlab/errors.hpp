#pragma once

#include <stdexcept>
#include <string>

namespace mehler {

/// Malformed inputs: dimension mismatches, invalid parameters, bad configs.
class StructuralError : public std::invalid_argument {
public:
    explicit StructuralError(const std::string& what) : std::invalid_argument(what) {}
};

/// An operation was asked of a symbol/model kind that does not support it.
class UndefinedForKindError : public std::domain_error {
public:
    explicit UndefinedForKindError(const std::string& what) : std::domain_error(what) {}
};

/// Numerical failure (quadrature non-convergence, overflow guard).
/// Carries the partial estimate so callers can report it.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double partial, double error_estimate)
        : std::runtime_error(what), partial_estimate(partial), error_estimate(error_estimate) {}
    double partial_estimate;
    double error_estimate;
};

}  // namespace mehler
