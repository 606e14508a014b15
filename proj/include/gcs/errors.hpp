#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gcs {

/// Base class for every error raised by the gcs libraries.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative numeric routine failed to converge.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A query fell outside the domain of the data it was made against.
class OutOfBoundsError : public Error {
public:
    using Error::Error;
};

/// A state machine was asked to make a transition it does not allow.
class InvalidTransitionError : public Error {
public:
    using Error::Error;
};

/// A value violated a documented domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. Line and column are 1-based; 0 means "not known".
class ParseError : public Error {
public:
    ParseError(const std::string &what, std::size_t line, std::size_t column = 0)
        : Error(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string &what, std::size_t line, std::size_t column) {
        std::string out = "line " + std::to_string(line);
        if (column != 0) {
            out += ", column " + std::to_string(column);
        }
        return out + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

} // namespace gcs
