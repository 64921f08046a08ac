#pragma once

#include <stdexcept>
#include <string>

namespace ffts {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Curves combined across incompatible grids.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// Shape or size preconditions violated (orders, horizons, lengths).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Grid too short for the requested operation.
class InsufficientGridError : public DimensionError {
public:
    using DimensionError::DimensionError;
};

/// Not enough observations to build the requested forecast-error pool.
class InsufficientHistoryError : public DimensionError {
public:
    using DimensionError::DimensionError;
};

/// Non-finite or otherwise malformed numeric input.
class InvalidDataError : public Error {
public:
    using Error::Error;
};

/// Interval bounds out of order.
class InvalidIntervalError : public InvalidDataError {
public:
    using InvalidDataError::InvalidDataError;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Bad configuration values or unknown configuration keys.
class InvalidConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical failure (singular systems, degenerate weights, failed iterations).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Regression design without full column rank.
class SingularFitError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// All observation weights collapsed to (near) zero.
class DegenerateWeightsError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Malformed input file; carries the 1-based line number when known (0 otherwise).
class ParseError : public InvalidDataError {
public:
    ParseError(const std::string& message, std::size_t line)
        : InvalidDataError(line > 0 ? message + " (line " + std::to_string(line) + ")" : message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace ffts
