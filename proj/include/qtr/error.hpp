#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qtr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid physical parameters or malformed input (maps to CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A solver could not produce a valid result (maps to CLI exit code 1).
class NumericalError : public Error {
public:
    using Error::Error;
};

class SingularConfigurationError : public NumericalError {
public:
    SingularConfigurationError(std::size_t i, std::size_t j)
        : NumericalError("coincident ions " + std::to_string(i) + " and " + std::to_string(j)),
          first(i), second(j) {}
    std::size_t first;
    std::size_t second;
};

class NonConvergenceError : public NumericalError {
public:
    NonConvergenceError(const std::string& what, std::vector<double> last_iterate,
                        double gradient_norm, int iterations)
        : NumericalError(what + " (|grad|_inf = " + std::to_string(gradient_norm) + " after " +
                         std::to_string(iterations) + " iterations)"),
          last_iterate(std::move(last_iterate)), gradient_norm(gradient_norm),
          iterations(iterations) {}
    std::vector<double> last_iterate;
    double gradient_norm;
    int iterations;
};

class SaddlePointError : public NumericalError {
public:
    SaddlePointError(double lowest_eigenvalue)
        : NumericalError("stationary point is a saddle (lowest Hessian eigenvalue " +
                         std::to_string(lowest_eigenvalue) + ")"),
          lowest_eigenvalue(lowest_eigenvalue) {}
    double lowest_eigenvalue;
};

class UnstableEquilibriumError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The trap configuration is outside the two-well tunneling regime.
class RegimeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace qtr
