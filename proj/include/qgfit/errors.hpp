#pragma once

#include <stdexcept>
#include <string>

namespace qgfit {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Invalid run configuration (bad flags, bad delay range, bad gamma, ...).
// Raised before any data is touched.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Malformed input file; message carries the line number.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Structurally valid input that violates a data contract
// (unsorted dates, nonpositive price, empty slice, CPI gap, ...).
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Zero-variance samples, constant price series and the like.
struct DegenerateError : Error {
    explicit DegenerateError(const std::string& msg) : Error(msg) {}
};

// Too few samples / delays / branch points for the requested operation.
struct InsufficientDataError : Error {
    explicit InsufficientDataError(const std::string& msg) : Error(msg) {}
};

// Root finding or optimization failed to locate a usable solution,
// or a matrix was numerically singular.
struct NumericalError : Error {
    explicit NumericalError(const std::string& msg) : Error(msg) {}
};

} // namespace qgfit
