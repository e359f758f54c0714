#pragma once

#include <stdexcept>
#include <string>

namespace molfate {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent model input (network, schema, model file).
class ModelError : public Error {
public:
    using Error::Error;
};

/// Model file syntax or reference error, carrying the 1-based line number.
class ParseError : public ModelError {
public:
    ParseError(std::size_t line, const std::string& message)
        : ModelError("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid arguments to a numerical routine (out-of-range time, bad step...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Failure while integrating or simulating (non-finite rate, orthant exit...).
class SimulationError : public Error {
public:
    using Error::Error;
};

/// A bound's hypothesis does not hold for the requested inputs.
class BoundUnavailable : public Error {
public:
    using Error::Error;
};

}  // namespace molfate
