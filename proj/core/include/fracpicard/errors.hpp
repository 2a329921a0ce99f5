#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracpicard {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a special function (poles, non-integrable
/// singularities, grids that are too coarse for an operation).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A truncated series or iteration ran out of budget before meeting its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Two sampled objects live on different grids.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// Syntax or validation failure in a right-hand side expression.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Evaluation of a right-hand side hit log/sqrt of a negative number,
/// division by zero or a pole. Carries the source position of the failing node.
class EvalError : public Error {
public:
    EvalError(const std::string& message, std::size_t position)
        : Error(message + " (expression position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Overflow or NaN produced while iterating.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace fracpicard
